"""graph6 / sparse6 line codecs.

graph6 packs the upper triangle of the adjacency matrix column by column
into 6-bit chunks offset by 63; sparse6 is the edge-list variant marked by
a leading ':'.  Encoding always emits graph6; decoding accepts both.
"""

from __future__ import annotations

from .graphs import Graph, build_graph


class CodecError(ValueError):
    """Malformed graph6/sparse6 input."""


def _encode_size(n: int) -> bytes:
    if n < 0:
        raise CodecError("negative vertex count")
    if n <= 62:
        return bytes([n + 63])
    if n <= 258047:
        return bytes(
            [126, ((n >> 12) & 63) + 63, ((n >> 6) & 63) + 63, (n & 63) + 63]
        )
    if n <= 68719476735:
        return bytes([126, 126] + [((n >> s) & 63) + 63 for s in range(30, -1, -6)])
    raise CodecError("vertex count too large for graph6")


def _decode_size(data: bytes, pos: int) -> tuple[int, int]:
    if pos >= len(data):
        raise CodecError("truncated size header")
    c = data[pos]
    if c != 126:
        return c - 63, pos + 1
    if pos + 1 < len(data) and data[pos + 1] == 126:
        chunk = data[pos + 2 : pos + 8]
        if len(chunk) != 6:
            raise CodecError("truncated size header")
        n = 0
        for b in chunk:
            n = (n << 6) | (b - 63)
        return n, pos + 8
    chunk = data[pos + 1 : pos + 4]
    if len(chunk) != 3:
        raise CodecError("truncated size header")
    n = 0
    for b in chunk:
        n = (n << 6) | (b - 63)
    return n, pos + 4


def to_graph6(g: Graph) -> str:
    """Encode a graph as a graph6 line (no header, no newline)."""
    n = g.n
    out = bytearray(_encode_size(n))
    bits = 0
    nbits = 0
    present = g.edge_set
    for v in range(1, n):
        for u in range(v):
            bits = (bits << 1) | (1 if (u, v) in present else 0)
            nbits += 1
            if nbits == 6:
                out.append(bits + 63)
                bits = nbits = 0
    if nbits:
        out.append((bits << (6 - nbits)) + 63)
    return out.decode("ascii")


def _from_graph6_body(data: bytes) -> Graph:
    n, pos = _decode_size(data, 0)
    need = (n * (n - 1) // 2 + 5) // 6
    body = data[pos:]
    if len(body) != need:
        raise CodecError(f"graph6 body length {len(body)}, expected {need}")
    for b in body:
        if not 63 <= b <= 126:
            raise CodecError(f"invalid graph6 byte {b}")
    edges = []
    idx = 0
    total = n * (n - 1) // 2
    for v in range(1, n):
        for u in range(v):
            byte = body[idx // 6]
            bit = (byte - 63) >> (5 - idx % 6) & 1
            if bit:
                edges.append((u, v))
            idx += 1
    # padding bits must be zero
    if total % 6 and body:
        pad = (body[-1] - 63) & ((1 << (6 - total % 6)) - 1)
        if pad:
            raise CodecError("nonzero padding bits")
    return Graph(n, tuple(sorted(edges)))


class _BitReader:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def read(self, k: int) -> int:
        out = 0
        for _ in range(k):
            byte_i, bit_i = divmod(self.pos, 6)
            if byte_i >= len(self.data):
                raise CodecError("ran off the end of sparse6 data")
            b = self.data[byte_i] - 63
            out = (out << 1) | ((b >> (5 - bit_i)) & 1)
            self.pos += 1
        return out


def _from_sparse6_body(data: bytes) -> Graph:
    n, pos = _decode_size(data, 0)
    body = data[pos:]
    for b in body:
        if not 63 <= b <= 126:
            raise CodecError(f"invalid sparse6 byte {b}")
    k = max(1, (n - 1).bit_length())
    reader = _BitReader(body)
    edges = set()
    v = 0
    total_bits = len(body) * 6
    while reader.pos + 1 + k <= total_bits:
        b = reader.read(1)
        x = reader.read(k)
        if b:
            v += 1
        if x > v:
            v = x
        elif v < n:
            if x == v:
                raise CodecError("sparse6 encodes a self-loop")
            e = (x, v) if x < v else (v, x)
            if e in edges:
                raise CodecError("sparse6 encodes a duplicate edge")
            edges.add(e)
        if v >= n:
            break
    return Graph(n, tuple(sorted(edges)))


def from_graph6(line: str) -> Graph:
    """Decode one graph6 or sparse6 line (optional format header allowed)."""
    s = line.strip()
    for header in (">>graph6<<", ">>sparse6<<"):
        if s.startswith(header):
            s = s[len(header):]
    if not s:
        raise CodecError("empty line")
    data = s.encode("ascii")
    if data[0:1] == b":":
        return _from_sparse6_body(data[1:])
    return _from_graph6_body(data)


def read_graph_file(path: str) -> list[Graph]:
    """All graphs in a file, one graph6/sparse6 line each; '#' lines skipped."""
    out = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            out.append(from_graph6(line))
    return out


def parse_edge_list(text: str) -> Graph:
    """Edge-list format: first non-comment line is n, then one 'u v' per line."""
    lines = [
        ln.strip()
        for ln in text.splitlines()
        if ln.strip() and not ln.strip().startswith("#")
    ]
    if not lines:
        raise CodecError("empty edge list")
    n = int(lines[0])
    edges = []
    for ln in lines[1:]:
        u, v = ln.split()
        edges.append((int(u), int(v)))
    return build_graph(n, edges)
