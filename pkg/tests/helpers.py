"""Seeded random formula generators shared across the test modules."""

from tml.syntax import BOT, TOP, And, Box, Dia, Neg, Or, Succ, Var

FULL_OPS = ("neg", "box", "dia", "and", "or")
SUCC_OPS = ("neg", "succ")
MIXED_OPS = FULL_OPS + ("succ",)

_OP_TABLES = {"full": FULL_OPS, "succ": SUCC_OPS, "mixed": MIXED_OPS}


def random_formula(rng, names=("p", "q", "r"), depth=4, ops="mixed"):
    """A random formula of nesting depth at most `depth`.  `ops` picks the
    connective pool: 'full', 'succ', 'mixed', or an explicit tuple."""
    table = _OP_TABLES.get(ops, ops)
    if depth <= 0 or rng.random() < 0.2:
        r = rng.random()
        if r < 0.8:
            return Var(rng.choice(names))
        if ops == "succ" or r < 0.9:
            return BOT
        return TOP
    op = rng.choice(table)
    if op == "neg":
        return Neg(random_formula(rng, names, depth - 1, ops))
    if op == "box":
        return Box(random_formula(rng, names, depth - 1, ops))
    if op == "dia":
        return Dia(random_formula(rng, names, depth - 1, ops))
    a = random_formula(rng, names, depth - 1, ops)
    b = random_formula(rng, names, depth - 1, ops)
    return {"and": And, "or": Or, "succ": Succ}[op](a, b)


def modal_ladder(k, l, m, n):
    """The schema with k diamonds over l boxes on the left of > and m boxes
    over n diamonds on the right, all on the variable p."""
    f = Var("p")
    for _ in range(l):
        f = Box(f)
    for _ in range(k):
        f = Dia(f)
    g = Var("p")
    for _ in range(n):
        g = Dia(g)
    for _ in range(m):
        g = Box(g)
    return Succ(f, g)


def fold_and(formulas):
    formulas = list(formulas)
    acc = formulas[0]
    for f in formulas[1:]:
        acc = And(acc, f)
    return acc
