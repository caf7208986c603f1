"""
Data Pipeline
=============

CSV ingestion and the preprocessing applied to price data before graph
estimation: log-ratio returns, column standardization and column selection.
"""

import logging
from pathlib import Path
from typing import List, Literal, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from ..core.dataset import Dataset
from ..utils.exceptions import DataFormatError, InvalidInputError
from ..utils.validators import ArrayLike, as_matrix

logger = logging.getLogger(__name__)

Selection = Union[range, Sequence[Union[str, int]]]


class PriceTable:
    """
    T×p matrix of strictly positive prices with optional tickers.
    """

    def __init__(self, values: ArrayLike, column_names: Optional[Sequence[str]] = None):
        matrix = as_matrix(values, name="PriceTable")

        if matrix.shape[0] < 2:
            raise InvalidInputError(f"PriceTable needs at least 2 time points, got {matrix.shape[0]}")
        if matrix.shape[1] < 1:
            raise InvalidInputError("PriceTable needs at least one column")

        bad = np.argwhere(matrix <= 0.0)
        if bad.size:
            row, col = (int(v) for v in bad[0])
            raise InvalidInputError(
                f"Nonpositive price {matrix[row, col]!r} at row {row}, column {col}"
            )

        if column_names is not None and len(column_names) != matrix.shape[1]:
            raise InvalidInputError(
                f"PriceTable has {matrix.shape[1]} columns but {len(column_names)} column names"
            )

        self.values = matrix
        self.column_names = tuple(str(c) for c in column_names) if column_names is not None else None

    @property
    def T(self) -> int:
        return self.values.shape[0]

    @property
    def p(self) -> int:
        return self.values.shape[1]

    def __repr__(self) -> str:
        return f"PriceTable(T={self.T}, p={self.p})"


def _read_matrix(path: Union[str, Path], has_header: bool, delimiter: str) -> Tuple[np.ndarray, Optional[List[str]]]:
    """Parse a rectangular numeric table; errors cite 1-based file line and column"""
    try:
        frame = pd.read_csv(
            path,
            sep=delimiter,
            header=0 if has_header else None,
            dtype=str,
            keep_default_na=False,
            skipinitialspace=True,
            skip_blank_lines=False,
        )
    except FileNotFoundError:
        raise DataFormatError(f"Input file {path} does not exist")
    except pd.errors.EmptyDataError:
        raise DataFormatError(f"Input file {path} is empty")
    except pd.errors.ParserError as e:
        raise DataFormatError(f"Malformed CSV {path}: {str(e).strip()}")

    # blank lines come back as all-NaN rows; drop them but keep each row's file line
    blank = frame.isna().to_numpy().all(axis=1)
    first_line = 2 if has_header else 1
    lines = np.flatnonzero(~blank) + first_line
    frame = frame.loc[~blank]

    if frame.shape[0] == 0:
        raise DataFormatError(f"Input file {path} has no data rows")

    missing = np.argwhere(frame.isna().to_numpy())
    if missing.size:
        r, c = (int(v) for v in missing[0])
        raise DataFormatError(f"missing value at line {lines[r]}, column {c + 1} of {path}")

    names = [str(c).strip() for c in frame.columns] if has_header else None
    cells = frame.to_numpy(dtype=str)

    try:
        values = cells.astype(np.float64)
    except ValueError:
        values = None

    if values is None:
        # only reached on bad input: locate the first offending cell
        for r, row in enumerate(cells):
            for c, cell in enumerate(row):
                try:
                    float(cell)
                except ValueError:
                    what = "missing value" if cell.strip() == "" else f"non-numeric cell '{cell}'"
                    raise DataFormatError(f"{what} at line {lines[r]}, column {c + 1} of {path}")

    bad = np.argwhere(~np.isfinite(values))
    if bad.size:
        r, c = (int(v) for v in bad[0])
        raise DataFormatError(f"non-finite value at line {lines[r]}, column {c + 1} of {path}")

    logger.info(f"Read {values.shape[0]}×{values.shape[1]} table from {path}")
    return values, names


def read_csv(
    path: Union[str, Path],
    has_header: bool = False,
    delimiter: str = ",",
    kind: Literal["dataset", "prices"] = "dataset",
) -> Union[Dataset, PriceTable]:
    """
    Read a numeric CSV file.

    Args:
        path: CSV file
        has_header: Take column names from the first row
        delimiter: Field separator
        kind: Build a Dataset or a PriceTable

    Returns:
        Parsed Dataset or PriceTable

    Raises:
        DataFormatError: On ragged rows, non-numeric or missing cells, or an empty file
    """
    values, names = _read_matrix(path, has_header, delimiter)
    if kind == "prices":
        return PriceTable(values, names)
    return Dataset(values, names)


def log_ratio_transform(prices: PriceTable) -> Dataset:
    """
    Log-ratio returns ln(price[t+1] / price[t]); the output has T-1 rows.
    """
    values = prices.values
    returns = np.log(values[1:] / values[:-1])
    return Dataset(returns, prices.column_names)


def standardize(data: Dataset) -> Dataset:
    """
    Center each column and scale it to unit sample variance (n-1 denominator).

    Raises:
        InvalidInputError: If a column is constant
    """
    values = data.values
    means = values.mean(axis=0)
    sds = values.std(axis=0, ddof=1)

    constant = np.flatnonzero(sds == 0.0)
    if constant.size:
        raise InvalidInputError(
            f"Column '{data.label(int(constant[0]))}' is constant and cannot be standardized"
        )

    return Dataset((values - means) / sds, data.column_names)


def _resolve_indices(spec: Selection, p: int, column_names: Optional[Sequence[str]]) -> List[int]:
    indices: List[int] = []
    for item in spec:
        if isinstance(item, (int, np.integer)):
            index = int(item)
            if not 0 <= index < p:
                raise InvalidInputError(f"Column index {index} is outside 0..{p - 1}")
            indices.append(index)
        else:
            if column_names is None or item not in column_names:
                raise InvalidInputError(f"Unknown column '{item}'")
            indices.append(list(column_names).index(item))
    return indices


def select_columns(data: Dataset, spec: Selection) -> Dataset:
    """
    Column subset in the order requested.

    Args:
        data: Source dataset
        spec: A range of indices, or a sequence of column names and/or indices

    Raises:
        InvalidInputError: On unknown names, out-of-range indices or fewer than 2 columns
    """
    indices = _resolve_indices(spec, data.p, data.column_names)
    if len(indices) < 2:
        raise InvalidInputError(f"Selection must keep at least 2 columns, got {len(indices)}")

    names = [data.column_names[i] for i in indices] if data.column_names is not None else None
    return Dataset(data.values[:, indices], names)


def select_price_columns(prices: PriceTable, spec: Selection) -> PriceTable:
    """Column subset of a price table, resolved like :func:`select_columns`"""
    indices = _resolve_indices(spec, prices.p, prices.column_names)
    if not indices:
        raise InvalidInputError("Selection must keep at least one column")

    names = [prices.column_names[i] for i in indices] if prices.column_names is not None else None
    return PriceTable(prices.values[:, indices], names)


def parse_selection(text: str, column_names: Optional[Sequence[str]] = None) -> Selection:
    """
    Parse a command-line column selection.

    ``"START:STOP"`` is a half-open index range; otherwise a comma separated
    list where each token is a column name (when names are known) or a
    0-based index.
    """
    text = text.strip()
    if ":" in text and "," not in text:
        start, _, stop = text.partition(":")
        try:
            return range(int(start or 0), int(stop))
        except ValueError:
            raise InvalidInputError(f"Invalid column range '{text}'")

    tokens: List[Union[str, int]] = []
    for token in (t.strip() for t in text.split(",")):
        if not token:
            continue
        if column_names is not None and token in column_names:
            tokens.append(token)
            continue
        try:
            tokens.append(int(token))
        except ValueError:
            tokens.append(token)
    return tokens
