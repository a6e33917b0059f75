"""Text formats: 0-1 program instances and SDPA sparse problem files.

Instance format (whitespace separated, ``#`` starts a comment)::

    n m_user
    c_1 ... c_n
    a_11 ... a_1n b_1        (m_user rows)

SDPA sparse layout as written by :func:`emit_sdpa`::

    * lsrelax kind=ls n=1 m=3      optional comment lines
    8                              number of constraints
    2                              number of blocks
    2 -6                           block sizes, negative = diagonal block
    0 0 0 0 0 0 0 1                right-hand sides b_k
    0 1 1 2 0.5                    matno blockno i j value, upper triangle

SDPA files describe ``max F_0 . Y  s.t.  F_k . Y = b_k,  Y PSD``; the cost
is therefore written as ``F_0 = -C`` so that the file's optimum is the
bound of the 0-1 program. Constraint order is the cut order: product cuts
of the first kind column-major, then the second kind, then the
``X[0,j] = X[j,j]`` rows, normalisation last.
"""

from __future__ import annotations

import math
import re

import numpy as np

from .core_model import BipInstance
from .standard_form import KIND_GENERIC, KIND_LP, KIND_LS, BlockMatrix, SdpProblem


class ParseError(ValueError):
    pass


def format_number(v: float) -> str:
    """Shortest decimal that parses back to the same double."""
    v = float(v)
    if not math.isfinite(v):
        raise ValueError(f"cannot serialise non-finite value {v}")
    s = repr(v)
    return s[:-2] if s.endswith(".0") else s


def _parse_number(tok: str, where: str) -> float:
    try:
        v = float(tok)
    except ValueError:
        raise ParseError(f"{where}: '{tok}' is not a number") from None
    if not math.isfinite(v):
        raise ParseError(f"{where}: '{tok}' is not finite")
    return v


# -- instances ---------------------------------------------------------------

def parse_instance(text: str) -> BipInstance:
    lines = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        toks = raw.split("#", 1)[0].split()
        if toks:
            lines.append((lineno, toks))
    if not lines:
        raise ParseError("empty input")

    def numbers(idx, count):
        lineno, toks = lines[idx]
        if len(toks) != count:
            raise ParseError(f"line {lineno}: expected {count} tokens, found {len(toks)}")
        return [_parse_number(t, f"line {lineno}") for t in toks]

    lineno, head = lines[0]
    if len(head) != 2:
        raise ParseError(f"line {lineno}: expected 2 tokens, found {len(head)}")
    try:
        n, m = int(head[0]), int(head[1])
    except ValueError:
        raise ParseError(f"line {lineno}: dimensions must be integers") from None
    if n < 1 or m < 0:
        raise ParseError(f"line {lineno}: need n >= 1 and m_user >= 0")
    if len(lines) < 2 + m:
        last = lines[-1][0]
        raise ParseError(f"line {last + 1}: expected {2 + m} data lines, found {len(lines)}")
    if len(lines) > 2 + m:
        raise ParseError(f"line {lines[2 + m][0]}: unexpected extra line")
    c = numbers(1, n)
    rows = [numbers(2 + k, n + 1) for k in range(m)]
    A = np.array([r[:n] for r in rows]).reshape(m, n)
    b = np.array([r[n] for r in rows])
    return BipInstance(c, A, b)


def format_instance(inst: BipInstance) -> str:
    out = [f"{inst.n} {inst.m_user}", " ".join(format_number(v) for v in inst.c)]
    for a, bi in inst.rows:
        out.append(" ".join(format_number(v) for v in [*a, bi]))
    return "\n".join(out) + "\n"


# -- SDPA sparse ---------------------------------------------------------------

def emit_sdpa(prob: SdpProblem) -> str:
    d = prob.blocks.dense_block_order
    s = prob.blocks.surplus_count
    sizes = []
    if d:
        sizes.append(d)
    if s:
        sizes.append(-s)
    lines = [f"* lsrelax kind={prob.kind} n={prob.n} m={prob.m}",
             str(prob.num_constraints), str(len(sizes)),
             " ".join(str(v) for v in sizes),
             " ".join(format_number(v) for v in prob.b)]
    diag_block = 2 if d else 1

    def entries(matno, dense, diag):
        for i, j in zip(*np.triu_indices(d)):
            v = dense[i, j]
            if v != 0:
                lines.append(f"{matno} 1 {i + 1} {j + 1} {format_number(v)}")
        for i in np.flatnonzero(diag):
            lines.append(f"{matno} {diag_block} {i + 1} {i + 1} {format_number(diag[i])}")

    entries(0, -prob.C.dense, -prob.C.diag)
    for k in range(prob.num_constraints):
        entries(k + 1, prob.A_dense[k], prob.A_diag[k])
    return "\n".join(lines) + "\n"


_HEADER = re.compile(r"lsrelax\s+kind=(\w+)\s+n=(\d+)\s+m=(\d+)")


def parse_sdpa(text: str) -> SdpProblem:
    raw_lines = text.splitlines()
    kind, n, m = KIND_GENERIC, 0, 0
    body_start = 0
    for idx, line in enumerate(raw_lines):
        stripped = line.strip()
        if stripped.startswith(("*", '"')):
            hit = _HEADER.search(stripped)
            if hit:
                kind, n, m = hit.group(1), int(hit.group(2)), int(hit.group(3))
            continue
        body_start = idx
        break
    else:
        raise ParseError("empty input")

    toks: list[tuple[int, str]] = []
    for lineno, line in enumerate(raw_lines[body_start:], start=body_start + 1):
        for t in re.sub(r"[{}(),]", " ", line).split():
            toks.append((lineno, t))
    pos = 0

    def take(what):
        nonlocal pos
        if pos >= len(toks):
            raise ParseError(f"unexpected end of input while reading {what}")
        pos += 1
        return toks[pos - 1]

    def take_int(what):
        lineno, t = take(what)
        try:
            return int(t)
        except ValueError:
            raise ParseError(f"line {lineno}: malformed {what} '{t}'") from None

    K = take_int("constraint count")
    if K <= 0:
        raise ParseError(f"{K} constraints: a problem needs at least one")
    nblocks = take_int("block count")
    if nblocks not in (1, 2):
        raise ParseError(f"{nblocks} blocks: expected one dense and/or one diagonal block")
    sizes = [take_int("block size") for _ in range(nblocks)]
    dense_sizes = [v for v in sizes if v > 0]
    diag_sizes = [-v for v in sizes if v < 0]
    if len(dense_sizes) > 1 or len(diag_sizes) > 1 or 0 in sizes:
        raise ParseError(f"block sizes {sizes}: expected at most one dense and one diagonal block")
    if nblocks == 2 and sizes[0] < 0:
        raise ParseError("the dense block must precede the diagonal block")
    d = dense_sizes[0] if dense_sizes else 0
    s = diag_sizes[0] if diag_sizes else 0
    b = np.array([_parse_number(t, f"line {ln}") for ln, t in (take("rhs") for _ in range(K))])

    Cd, Cs = np.zeros((d, d)), np.zeros(s)
    Ad, As = np.zeros((K, d, d)), np.zeros((K, s))
    while pos < len(toks):
        lineno = toks[pos][0]
        matno = take_int("matrix number")
        blk = take_int("block number")
        i = take_int("row index")
        j = take_int("column index")
        v = _parse_number(take("value")[1], f"line {lineno}")
        if not 0 <= matno <= K:
            raise ParseError(f"line {lineno}: matrix number {matno} outside 0..{K}")
        if not 1 <= blk <= nblocks:
            raise ParseError(f"line {lineno}: block number {blk} outside 1..{nblocks}")
        if i > j:
            raise ParseError(f"line {lineno}: lower-triangle entry ({i}, {j})")
        size = sizes[blk - 1]
        if not (1 <= i and j <= abs(size)):
            raise ParseError(f"line {lineno}: index ({i}, {j}) outside block of size {abs(size)}")
        if size < 0:
            if i != j:
                raise ParseError(f"line {lineno}: off-diagonal entry in diagonal block")
            target = Cs if matno == 0 else As[matno - 1]
            target[i - 1] = -v if matno == 0 else v
        else:
            target = Cd if matno == 0 else Ad[matno - 1]
            val = -v if matno == 0 else v
            target[i - 1, j - 1] = val
            target[j - 1, i - 1] = val
    return SdpProblem(BlockMatrix(Cd, Cs), Ad, As, b, _tags(kind, n, m, K), n, m, kind)


def _tags(kind: str, n: int, m: int, K: int) -> tuple:
    if kind == KIND_LS and K == 2 * m * n + n + 1:
        tags = [("cut3", i, j) for j in range(1, n + 1) for i in range(1, m + 1)]
        tags += [("cut4", i, j) for j in range(1, n + 1) for i in range(1, m + 1)]
        tags += [("cut5", None, j) for j in range(1, n + 1)]
        return tuple(tags + [("cut6", None, None)])
    if kind == KIND_LP and K == m:
        return tuple(("row", i, None) for i in range(1, m + 1))
    return ()
