"""Fixed per-example plotting parameters.

Frozen so that figures from different runs of the same experiment are
directly comparable; nothing here is derived from the data except the
color limits, which come from the extrema recorded in the run's report.
"""

FIGSIZE = (6.4, 4.8)
DPI = 110

STYLES = {
    1: {
        "cmap": "viridis",
        "surface_view": {"elev": 30, "azim": -60},
        "cross_sections": [0.12],
        "contour_levels": 30,
    },
    2: {
        "cmap": "viridis",
        "surface_view": {"elev": 32, "azim": -50},
        "cross_sections": [0.0, 0.15, -0.25, -0.2],
        "contour_levels": 24,
    },
    3: {
        "cmap": "viridis",
        "surface_view": {"elev": 28, "azim": -70},
        "cross_sections": [0.0, -1.5],
        "contour_levels": 30,
    },
}


def style_for(example_id: int) -> dict:
    if example_id not in STYLES:
        raise ValueError(f"no style for example {example_id}; known: {sorted(STYLES)}")
    return STYLES[example_id]
