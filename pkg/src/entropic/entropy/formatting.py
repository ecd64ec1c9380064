"""Human-readable and JSON renderings of facet lists."""

from typing import Optional, Sequence

from rich.table import Table

from .inequality import EntropicInequality, InequalityClass
from .vector import EntropySpace, Subset


def used_columns(space: EntropySpace, rows: Sequence[EntropicInequality]) -> list[Subset]:
    """Coordinates with a nonzero coefficient in some row, in coordinate order."""
    used = set()
    for row in rows:
        used.update(row.coeffs)
    return space.sort(used)


def facet_table(
    classes: Sequence[InequalityClass],
    space: EntropySpace,
    title: str = "Symmetry classes",
    columns: Optional[Sequence[Subset]] = None,
) -> Table:
    """
    One row per class representative, one column per joint entropy.

    Every row reads "<= 0". With bilocality this reproduces the familiar
    layout H(A_x), H(B), H(C_z), H(A_xB), H(BC_z), H(A_xBC_z).
    """
    representatives = [cls.representative for cls in classes]
    columns = list(columns) if columns is not None else used_columns(space, representatives)
    table = Table(title=title, show_header=True)
    table.add_column("#", width=3)
    for subset in columns:
        table.add_column(space.label(subset), justify="right")
    table.add_column("size", justify="right")
    table.add_column("trivial", width=8)
    for i, cls in enumerate(classes, 1):
        row = [str(i)]
        row += [str(cls.representative.coefficient(s)) for s in columns]
        row.append(str(cls.size))
        if cls.trivial is None:
            row.append("")
        else:
            row.append("[dim]yes[/dim]" if cls.trivial else "[green]no[/green]")
        table.add_row(*row)
    return table


def equation_lines(equations: Sequence[EntropicInequality], space: EntropySpace) -> list[str]:
    return [eq.format(space) for eq in equations]


def facet_rows(
    facets: Sequence[EntropicInequality],
    space: EntropySpace,
    columns: Optional[Sequence[Subset]] = None,
) -> tuple[list[str], list[list[int]]]:
    """Header labels and integer rows, for CSV-style output."""
    columns = list(columns) if columns is not None else used_columns(space, facets)
    header = [space.label(s) for s in columns]
    return header, [list(facet.vector(columns)) for facet in facets]
