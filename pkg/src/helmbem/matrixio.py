"""Read/write operator matrices as CSV or JSON.

CSV layout: one header line
    # helmbem-matrix op=<..> method=<..> k=<..> kind=<..> nq=<..> n=<N>
followed by row-major `i,j,re,im` records.  Floats are printed with 17
significant digits, which round-trips IEEE doubles bit-exactly.
"""
from __future__ import annotations

import json

import numpy as np

from .assembly import Method, Operator, OperatorMatrix
from .specfun import HankelKind

__all__ = ["read_matrix", "write_matrix", "matrix_to_text", "matrix_from_text"]

MAGIC = "# helmbem-matrix"


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def matrix_to_text(mat: OperatorMatrix) -> str:
    n = mat.n_nodes
    lines = [f"{MAGIC} op={mat.op.value} method={mat.method.value} "
             f"k={_fmt(mat.k)} kind={mat.kind.value} nq={mat.nq} n={n}"]
    for i in range(n):
        for j in range(n):
            v = mat.entries[i, j]
            lines.append(f"{i},{j},{_fmt(v.real)},{_fmt(v.imag)}")
    return "\n".join(lines) + "\n"


def matrix_from_text(text: str) -> OperatorMatrix:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith(MAGIC):
        raise ValueError("not a helmbem matrix document")
    fields = dict(item.split("=", 1) for item in lines[0][len(MAGIC):].split())
    n = int(fields["n"])
    entries = np.zeros((n, n), dtype=complex)
    if len(lines) - 1 != n * n:
        raise ValueError(f"expected {n * n} rows, found {len(lines) - 1}")
    for ln in lines[1:]:
        i_s, j_s, re_s, im_s = ln.split(",")
        entries[int(i_s), int(j_s)] = float(re_s) + 1j * float(im_s)
    return OperatorMatrix(op=Operator(fields["op"]),
                          method=Method(fields["method"]),
                          k=float(fields["k"]),
                          kind=HankelKind(int(fields["kind"])),
                          nq=int(fields["nq"]),
                          entries=entries)


def _to_json_obj(mat: OperatorMatrix) -> dict:
    return {
        "format": "helmbem-matrix",
        "op": mat.op.value,
        "method": mat.method.value,
        "k": mat.k,
        "kind": mat.kind.value,
        "nq": mat.nq,
        "n": mat.n_nodes,
        "entries": [
            {"i": i, "j": j,
             "re": mat.entries[i, j].real, "im": mat.entries[i, j].imag}
            for i in range(mat.n_nodes) for j in range(mat.n_nodes)
        ],
    }


def write_matrix(mat: OperatorMatrix, path, fmt: str = "csv") -> None:
    if fmt == "csv":
        text = matrix_to_text(mat)
    elif fmt == "json":
        text = json.dumps(_to_json_obj(mat), indent=1) + "\n"
    else:
        raise ValueError(f"unknown format {fmt!r}")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def read_matrix(path) -> OperatorMatrix:
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    if text.lstrip().startswith("{"):
        obj = json.loads(text)
        if obj.get("format") != "helmbem-matrix":
            raise ValueError("not a helmbem matrix document")
        n = int(obj["n"])
        entries = np.zeros((n, n), dtype=complex)
        for rec in obj["entries"]:
            entries[rec["i"], rec["j"]] = rec["re"] + 1j * rec["im"]
        return OperatorMatrix(op=Operator(obj["op"]), method=Method(obj["method"]),
                              k=float(obj["k"]), kind=HankelKind(int(obj["kind"])),
                              nq=int(obj["nq"]), entries=entries)
    return matrix_from_text(text)
