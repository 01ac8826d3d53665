"""Printed Koszul differentials, lowest degree first, entries as monomials in x, y, z."""

N3 = {
    "x": [
        "1",
        "x",
    ],
    "xy": [
        "1; -1",
        "y 0; 0 1; -x -x",
        "1 y 0; 0 0 1",
        "x y",
    ],
    "xyz": [
        "1; -1; 1",
        "z 0 0; 0 1 0; 0 0 1; -y -y 0; 1 0 -1; 0 x x",
        "1 z 0 0 0 0; -1 0 z 0 0 0; 0 0 0 1 0 0; 0 0 0 0 1 0; 0 0 0 0 0 1; 0 -y -y -1 -y 0; 0 x x 0 0 -1",
        "y 0 z 0 0 0 0; 0 1 0 z 0 0 0; -x -x 0 0 z 0 0; 0 0 0 0 0 1 0; 0 0 0 0 0 0 1; 0 0 -x -xy -y -x -y",
        "1 y 0 z 0 0; 0 0 1 0 z 0; 0 0 0 0 0 1",
        "x y z",
    ],
}

N4 = {
    "x": [
        "1",
        "1",
        "x",
    ],
    "xy": [
        "1; -1",
        "1 0; 0 1; -1 -1",
        "y 0 0; 0 1 0; 0 0 1; -x -x -x",
        "1 y 0 0; 0 0 1 0; 0 0 0 1",
        "1 y 0; 0 0 1",
        "x y",
    ],
    "xyz": [
        "1; -1; 1",
        "1 0 0; 0 1 0; 0 0 1; -1 -1 0; 1 0 -1; 0 1 1",
        "z 0 0 0 0 0; 0 1 0 0 0 0; 0 0 1 0 0 0; 0 0 0 1 0 0; 0 0 0 0 1 0; 0 0 0 0 0 1;"
        " -y -y 0 -y 0 0; 1 0 -1 0 -1 0; 0 1 1 0 0 -1; 0 0 0 x x x",
        "1 z 0 0 0 0 0 0 0 0; -1 0 z 0 0 0 0 0 0 0; 0 0 0 1 0 0 0 0 0 0; 0 0 0 0 1 0 0 0 0 0;"
        " 0 0 0 0 0 1 0 0 0 0; 0 0 0 0 0 0 1 0 0 0; 0 0 0 0 0 0 0 1 0 0; 0 0 0 0 0 0 0 0 1 0;"
        " 0 0 0 0 0 0 0 0 0 1; 0 -y -y -y -y 0 -1 -y 0 0; 0 1 1 0 0 -1 0 0 -1 0; 0 0 0 x x x 0 0 0 -1",
        "1 0 z 0 0 0 0 0 0 0 0 0; 0 1 0 z 0 0 0 0 0 0 0 0; -1 -1 0 0 z 0 0 0 0 0 0 0;"
        " 0 0 0 0 0 1 0 0 0 0 0 0; 0 0 0 0 0 0 1 0 0 0 0 0; 0 0 0 0 0 0 0 1 0 0 0 0;"
        " 0 0 0 0 0 0 0 0 1 0 0 0; 0 0 0 0 0 0 0 0 0 1 0 0; 0 0 0 0 0 0 0 0 0 0 1 0;"
        " 0 0 0 0 0 0 0 0 0 0 0 1; 0 0 -y -y -y -1 -y -y 0 -1 -y 0; 0 0 x x x 0 0 0 -1 0 0 -1",
        "y 0 0 z 0 0 0 0 0 0 0 0; 0 1 0 0 z 0 0 0 0 0 0 0; 0 0 1 0 0 z 0 0 0 0 0 0;"
        " -x -x -x 0 0 0 z 0 0 0 0 0; 0 0 0 0 0 0 0 1 0 0 0 0; 0 0 0 0 0 0 0 0 1 0 0 0;"
        " 0 0 0 0 0 0 0 0 0 1 0 0; 0 0 0 0 0 0 0 0 0 0 1 0; 0 0 0 0 0 0 0 0 0 0 0 1;"
        " 0 0 0 -x -xy -xy -y -x -xy -y -x -y",
        "1 y 0 0 z 0 0 0 0 0; 0 0 1 0 0 z 0 0 0 0; 0 0 0 1 0 0 z 0 0 0; 0 0 0 0 0 0 0 1 0 0;"
        " 0 0 0 0 0 0 0 0 1 0; 0 0 0 0 0 0 0 0 0 1",
        "1 y 0 z 0 0; 0 0 1 0 z 0; 0 0 0 0 0 1",
        "x y z",
    ],
}


def evaluate(entry: str, values: dict) -> int:
    sign = -1 if entry.startswith("-") else 1
    body = entry.lstrip("-")
    out = sign
    if body.isdigit():
        return sign * int(body)
    for ch in body:
        out *= values[ch]
    return out


def instantiate(display, values):
    """Integer matrices (list of row lists) for each printed differential."""
    mats = []
    for text in display:
        mats.append([[evaluate(e, values) for e in row.split()] for row in text.split(";")])
    return mats
