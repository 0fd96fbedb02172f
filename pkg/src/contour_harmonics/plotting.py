"""Hand-rolled SVG contour plots: observed curve, boundary rules, predicted
curve, and the top amplitude-ranked sinusoids of a fitted model.

The writer emits plain polylines with stable class names and fixed 2-decimal
coordinates, so output is byte-deterministic for fixed inputs.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .contours import DocumentContour, Structure, boundary_positions
from .features import columns_by_name, harmonic_features, parse_harmonic_name
from .fitting import FitResult, predict
from .stats import amplitude

WIDTH, HEIGHT = 960, 320
MARGIN_X, MARGIN_Y = 45, 20

_BOUNDARY_STYLE = {
    Structure.EDU: 'class="boundary-edu" stroke="#bbbbbb" stroke-width="1"',
    Structure.SENTENCE: (
        'class="boundary-sent" stroke="#7799cc" stroke-width="1"'
        ' stroke-dasharray="4,3"'
    ),
    Structure.PARAGRAPH: (
        'class="boundary-par" stroke="#cc6655" stroke-width="2"'
        ' stroke-dasharray="8,4"'
    ),
}

_SINUSOID_COLORS = ("#2a9d8f", "#e9c46a", "#f4a261", "#9b5de5", "#00b4d8")


def top_sinusoids(fit: FitResult, top_n: int) -> list[tuple[Structure, int, float, float]]:
    """The top_n (structure, order, beta_sin, beta_cos) by amplitude."""
    coeffs = dict(zip(fit.column_names, fit.coefficients))
    pairs: dict[tuple[Structure, int], list[float]] = {}
    for name, beta in coeffs.items():
        parsed = parse_harmonic_name(name)
        if parsed is None:
            continue
        structure, kind, k = parsed
        entry = pairs.setdefault((structure, k), [0.0, 0.0])
        entry[0 if kind == "sin" else 1] = float(beta)
    ranked = sorted(
        (
            (amplitude(b_sin, b_cos), structure, k, b_sin, b_cos)
            for (structure, k), (b_sin, b_cos) in pairs.items()
        ),
        key=lambda row: (-row[0], row[1].value, row[2]),
    )
    return [(s, k, b1, b2) for _, s, k, b1, b2 in ranked[:top_n]]


def _path(xs: np.ndarray, ys: np.ndarray, attrs: str) -> str:
    points = " ".join(f"{x:.2f},{y:.2f}" for x, y in zip(xs, ys))
    return f'<polyline {attrs} fill="none" points="{points}" />'


def plot_contour(
    doc: DocumentContour,
    fit: FitResult,
    top_n: int,
    path: Path | str,
) -> Path:
    """Write the contour, boundary rules, predicted curve, and top sinusoids."""
    n = doc.n_tokens
    observed = doc.surprisals()
    design = columns_by_name([doc], fit.column_names)
    predicted = predict(fit, design)
    sinusoids = top_sinusoids(fit, top_n)
    center = dict(zip(fit.column_names, fit.coefficients)).get("intercept", 0.0)

    curves = [observed, predicted]
    overlay = []
    for structure, k, b_sin, b_cos in sinusoids:
        sin, cos = harmonic_features(doc, structure, k)
        overlay.append(center + b_sin * sin + b_cos * cos)
    curves.extend(overlay)
    lo = min(float(np.min(c)) for c in curves)
    hi = max(float(np.max(c)) for c in curves)
    if hi <= lo:
        hi = lo + 1.0

    span_x = WIDTH - 2 * MARGIN_X
    span_y = HEIGHT - 2 * MARGIN_Y

    def to_x(t: np.ndarray) -> np.ndarray:
        return MARGIN_X + span_x * t / max(n - 1, 1)

    def to_y(v: np.ndarray) -> np.ndarray:
        return MARGIN_Y + span_y * (hi - v) / (hi - lo)

    t = np.arange(n)
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}"'
        f' height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">',
        f"<title>{doc.doc_id}</title>",
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white" />',
    ]
    for structure in (Structure.EDU, Structure.SENTENCE, Structure.PARAGRAPH):
        for b in boundary_positions(doc, structure):
            x = f"{float(to_x(np.array(b - 0.5))):.2f}"
            lines.append(
                f'<line {_BOUNDARY_STYLE[structure]} x1="{x}" y1="{MARGIN_Y}"'
                f' x2="{x}" y2="{HEIGHT - MARGIN_Y}" />'
            )
    for i, curve in enumerate(overlay):
        color = _SINUSOID_COLORS[i % len(_SINUSOID_COLORS)]
        structure, k, _, _ = sinusoids[i]
        attrs = (
            f'class="sinusoid" data-structure="{structure.value}" data-order="{k}"'
            f' stroke="{color}" stroke-width="1"'
        )
        lines.append(_path(to_x(t), to_y(curve), attrs))
    lines.append(
        _path(to_x(t), to_y(observed), 'class="contour" stroke="black" stroke-width="1"')
    )
    lines.append(
        _path(
            to_x(t),
            to_y(predicted),
            'class="predicted" stroke="#d62828" stroke-width="1.5"',
        )
    )
    lines.append(
        f'<text x="{MARGIN_X}" y="{HEIGHT - 5}" font-size="10">'
        f"{doc.doc_id}: surprisal range {lo:.2f}..{hi:.2f}</text>"
    )
    lines.append("</svg>")

    path = Path(path)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path
