# Expands the 4x8 circulant description of the (128,64) telecommand LDPC code
# into alist format. Blocks are 16x16: None = zero block, an int s = the
# identity shifted right by s, a pair (0, s) = identity plus that shift.
# Transcribed by hand; compare against the published parity-check matrix
# before relying on it for anything beyond this workbench.
M = 16
BLOCKS = [
    [(0, 7), 2, 14, 6, None, 0, 13, 0],
    [6, (0, 15), 0, 1, 0, None, 0, 7],
    [4, 1, (0, 15), 14, 11, 0, None, 3],
    [0, 1, 9, (0, 13), 14, 1, 0, None],
]


def shifts(block):
    if block is None:
        return []
    if isinstance(block, tuple):
        return list(block)
    return [block]


def rows():
    out = []
    for br, line in enumerate(BLOCKS):
        for i in range(M):
            cols = []
            for bc, block in enumerate(line):
                for s in shifts(block):
                    cols.append(bc * M + (i + s) % M)
            out.append(sorted(cols))
    return out


def main():
    h = rows()
    n, m = 8 * M, len(h)
    cols = [[] for _ in range(n)]
    for r, row in enumerate(h):
        for c in row:
            cols[c].append(r)
    lines = [f"{n} {m}", f"{max(map(len, cols))} {max(map(len, h))}",
             " ".join(str(len(c)) for c in cols), " ".join(str(len(r)) for r in h)]
    lines += [" ".join(str(r + 1) for r in c) for c in cols]
    lines += [" ".join(str(c + 1) for c in r) for r in h]
    print("\n".join(lines))


if __name__ == "__main__":
    main()
