"""graph6 short form (n <= 62).

The header byte is ``63 + n``.  The upper triangle is read column by column
(x01, x02, x12, x03, ...) and packed six bits per byte, most significant bit
first, each byte offset by 63, with the last byte zero-padded.
"""

from __future__ import annotations

from .graph import MAX_VERTICES, Graph, _from_rows


class Graph6Error(ValueError):
    pass


def encode(g: Graph) -> bytes:
    n = g.n
    if n > MAX_VERTICES:
        raise Graph6Error(f"short-form graph6 supports n <= {MAX_VERTICES}")
    out = bytearray([63 + n])
    acc = 0
    nbits = 0
    adj = g.adj
    for j in range(1, n):
        col = adj[j]
        for i in range(j):
            acc = (acc << 1) | (col >> i & 1)
            nbits += 1
            if nbits == 6:
                out.append(63 + acc)
                acc = 0
                nbits = 0
    if nbits:
        out.append(63 + (acc << (6 - nbits)))
    return bytes(out)


def decode(text: bytes | str) -> Graph:
    if isinstance(text, str):
        text = text.encode("ascii")
    text = text.strip()
    if not text:
        raise Graph6Error("empty graph6 string")
    n = text[0] - 63
    if not 0 <= n <= MAX_VERTICES:
        raise Graph6Error(f"bad header byte {text[0]!r}")
    total = n * (n - 1) // 2
    need = (total + 5) // 6
    payload = text[1:]
    if len(payload) != need:
        raise Graph6Error(f"expected {need} payload bytes for n={n}, got {len(payload)}")
    for b in payload:
        if not 63 <= b <= 126:
            raise Graph6Error(f"payload byte {b} outside 63..126")
    adj = [0] * n
    pos = 0
    for j in range(1, n):
        for i in range(j):
            byte = payload[pos // 6] - 63
            if byte >> (5 - pos % 6) & 1:
                adj[i] |= 1 << j
                adj[j] |= 1 << i
            pos += 1
    if total % 6:
        pad = 6 - total % 6
        if (payload[-1] - 63) & ((1 << pad) - 1):
            raise Graph6Error("nonzero padding bits")
    return _from_rows(n, adj)
