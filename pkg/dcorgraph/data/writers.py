"""
Artifact Writers
================

Output formats shared by the CLI subcommands:

- matrices: CSV, row-major, full matrix, 17 significant digits, '.' decimal
- graphs: edge-list text (``# nodes: p`` header, then one ``i j`` pair per
  line, 0-based, i < j, lexicographic) and Graphviz DOT
- summaries: JSON with sorted keys
- experiment tables: CSV with a header row
"""

import logging
import re
from pathlib import Path
from typing import Any, Dict, Iterable, Mapping, Optional, Sequence, Union

import networkx as nx
import numpy as np
import orjson
import pandas as pd

from ..core.dataset import Dataset
from ..core.thresholding import Adjacency
from ..utils.exceptions import DataFormatError, DimensionMismatchError

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

FLOAT_FORMAT = "%.17g"
NODES_HEADER = re.compile(r"^#\s*nodes:\s*(\d+)\s*$")


def write_matrix_csv(path: PathLike, matrix: np.ndarray) -> Path:
    """Write a full matrix with round-trip precision"""
    path = Path(path)
    np.savetxt(path, np.asarray(matrix, dtype=np.float64), fmt=FLOAT_FORMAT, delimiter=",")
    logger.debug(f"Wrote matrix {np.shape(matrix)} to {path}")
    return path


def write_dataset_csv(path: PathLike, data: Dataset) -> Path:
    """Write a Dataset; a header row is written when the columns are labelled"""
    path = Path(path)
    header = ",".join(data.column_names) if data.column_names is not None else ""
    np.savetxt(path, data.values, fmt=FLOAT_FORMAT, delimiter=",", header=header, comments="")
    logger.debug(f"Wrote dataset {data} to {path}")
    return path


def write_edge_list(path: PathLike, graph: Adjacency, comments: Optional[Mapping[str, Any]] = None) -> Path:
    """
    Write a graph as an edge list.

    Args:
        path: Output file
        graph: Graph to write
        comments: Extra ``# key: value`` header lines (e.g. the seed)
    """
    path = Path(path)
    with open(path, "wb") as fh:
        fh.write(f"# nodes: {graph.p}\n".encode("utf-8"))
        for key, value in (comments or {}).items():
            fh.write(f"# {key}: {value}\n".encode("utf-8"))
        nx.write_edgelist(graph.to_networkx(), fh, data=False)
    return path


def read_edge_list(path: PathLike, p: Optional[int] = None) -> Adjacency:
    """
    Read an edge list written by :func:`write_edge_list`.

    The node count comes from ``p`` or the ``# nodes:`` header; without
    either it is the largest node id plus one.

    Raises:
        DataFormatError: On unreadable lines
        DimensionMismatchError: If ``p`` contradicts the header
    """
    path = Path(path)
    if not path.exists():
        raise DataFormatError(f"Edge list {path} does not exist")

    header_p = None
    with open(path, "r", encoding="utf-8") as fh:
        for number, line in enumerate(fh, start=1):
            match = NODES_HEADER.match(line.strip())
            if match and header_p is None:
                header_p = int(match.group(1))
            tokens = line.split("#", 1)[0].split()
            if tokens and len(tokens) != 2:
                raise DataFormatError(
                    f"Malformed edge list {path}: line {number} has {len(tokens)} fields, expected 'i j'"
                )

    if p is not None and header_p is not None and p != header_p:
        raise DimensionMismatchError(f"Edge list {path} declares {header_p} nodes, expected {p}")

    try:
        graph = nx.read_edgelist(path, comments="#", nodetype=int, data=False)
    except (TypeError, ValueError) as e:
        raise DataFormatError(f"Malformed edge list {path}: {e}")

    pairs = [(min(u, v), max(u, v)) for u, v in graph.edges()]
    nodes = p if p is not None else header_p
    if nodes is None:
        nodes = max((v for pair in pairs for v in pair), default=0) + 1

    try:
        return Adjacency.from_edge_list(nodes, pairs)
    except Exception as e:
        raise DataFormatError(f"Invalid edge list {path}: {e}")


def write_dot(path: PathLike, graph: Adjacency, labels: Optional[Sequence[str]] = None) -> Path:
    """Write an undirected Graphviz graph; node labels default to indices"""
    path = Path(path)
    nx.nx_pydot.write_dot(graph.to_networkx(labels), path)
    return path


def write_json(path: PathLike, payload: Dict[str, Any]) -> Path:
    """Write a JSON document with sorted keys and 2-space indentation"""
    path = Path(path)
    options = orjson.OPT_INDENT_2 | orjson.OPT_SORT_KEYS | orjson.OPT_SERIALIZE_NUMPY | orjson.OPT_APPEND_NEWLINE
    path.write_bytes(orjson.dumps(payload, option=options))
    return path


def write_table_csv(path: PathLike, rows: Iterable[Mapping[str, Any]], columns: Sequence[str]) -> Path:
    """Write experiment rows (one per rep or dimension) with a header"""
    path = Path(path)
    frame = pd.DataFrame(list(rows), columns=list(columns))
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, na_rep="", lineterminator="\n")
    return path
