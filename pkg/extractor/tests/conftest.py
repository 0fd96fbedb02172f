import pytest

from contour_extractor.segments import SegmentedText, build_segmented

# Three short documents with hand-nested EDU/sentence/paragraph structure.
# Separating whitespace is attached to the start of each non-initial EDU so
# that space-prefixed subwords begin exactly at unit starts. Content words
# recur within each document to probe the repeated-token surprisal drop.
PROBE_DOCS: list[SegmentedText] = [
    build_segmented(
        "probe-ferry",
        [
            [
                [
                    "The ferry crossed the river before dawn,",
                    " while the town was still dark.",
                ],
                ["The ferry carried bread and coffee to the market."],
            ],
            [
                [
                    "When the ferry returned,",
                    " the market was full of voices.",
                ],
                [
                    "Fishermen bought the bread,",
                    " and the coffee was gone by noon.",
                ],
            ],
        ],
    ),
    build_segmented(
        "probe-library",
        [
            [
                ["The librarian keeps a record of every book."],
                [
                    "When a book leaves the building,",
                    " the librarian writes the name of the reader.",
                ],
            ],
            [
                [
                    "On quiet afternoons the reading room is empty,",
                    " and the librarian sorts every record by name.",
                ],
            ],
        ],
    ),
    build_segmented(
        "probe-train",
        [
            [
                ["The train to the city was late again."],
                [
                    "Commuters waited on the platform,",
                    " drinking coffee in the cold.",
                ],
            ],
            [
                [
                    "When the train arrived,",
                    " the platform was empty",
                    " and the coffee was cold.",
                ],
            ],
        ],
    ),
]


@pytest.fixture(scope="session")
def probe_docs():
    return PROBE_DOCS
