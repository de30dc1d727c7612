# /usr/bin/env python3
# Structure Survey Reports
# Tabulates every connectivity structure on a small carrier with its order and obstruction data

import pandas as pd

from src.core import (
    GroundSet,
    is_diffeologizable,
    is_integral,
    topological_obstruction_witness,
)
from src.oracle import enumerate_structures
from src.order import irreducibles, order_from_height, poset_height

SURVEY_COLUMNS = [
    "structure",
    "connected_sets",
    "irreducibles",
    "height",
    "order",
    "integral",
    "diffeologizable",
    "obstruction",
]


def survey_ground(n: int) -> GroundSet:
    return GroundSet(tuple(str(i) for i in range(1, n + 1)))


def survey_structures(n: int, integral: bool = True) -> pd.DataFrame:
    """
    One row per distinct structure on the points 1..n.

    Args:
        n: Carrier size (at most 4)
        integral: Enumerate integral structures only

    Returns:
        DataFrame with SURVEY_COLUMNS, rows in enumeration order
    """
    ground = survey_ground(n)
    rows = []
    for number, structure in enumerate(enumerate_structures(ground, integral), start=1):
        space = structure.to_space()
        graph = irreducibles(space)
        height = poset_height(graph)
        rows.append(
            {
                "structure": number,
                "connected_sets": " ".join(ground.format_family(k for k in structure.kappa if k)),
                "irreducibles": len(graph),
                "height": height,
                "order": order_from_height(height),
                "integral": is_integral(space),
                "diffeologizable": is_diffeologizable(space),
                "obstruction": topological_obstruction_witness(space) is not None,
            }
        )
    return pd.DataFrame(rows, columns=SURVEY_COLUMNS)


def summarize_orders(survey: pd.DataFrame) -> pd.DataFrame:
    """Structure counts per order, with how many of them admit the obstruction."""
    if survey.empty:
        return pd.DataFrame(columns=["order", "structures", "with_obstruction"])
    summary = (
        survey.groupby("order")
        .agg(structures=("structure", "count"), with_obstruction=("obstruction", "sum"))
        .reset_index()
    )
    summary["with_obstruction"] = summary["with_obstruction"].astype(int)
    return summary


def format_survey(survey: pd.DataFrame) -> str:
    if survey.empty:
        return "No structures."
    return survey.to_string(index=False)
