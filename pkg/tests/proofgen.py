"""Random proof builders for the deduction tests.

random_proof grows a schema-valid tree for a random goal, so check() must
accept it and the semantic oracle must agree with its judgement.  The
inject_* helpers wrap a proof in extra material that normalization has to
clean up: a detour for every introduction/elimination pair, a permutation
cut through a disjunction elimination, and a removable elimination whose
assumption classes are empty.
"""

import random

from tml import nd
from tml.syntax import And, Bot, Box, Neg, Or, Var


class MarkerSupply:
    def __init__(self, prefix="k"):
        self.prefix = prefix
        self.n = 0

    def fresh(self):
        self.n += 1
        return f"{self.prefix}{self.n}"


def random_nd_formula(rng, names, depth):
    """A formula over bot, variables, ~, &, | and []."""
    if depth <= 0 or rng.random() < 0.3:
        choices = [Var(n) for n in names] + [Bot()]
        return rng.choice(choices)
    kind = rng.choice(["neg", "and", "or", "box"])
    if kind == "neg":
        return Neg(random_nd_formula(rng, names, depth - 1))
    if kind == "box":
        return Box(random_nd_formula(rng, names, depth - 1))
    left = random_nd_formula(rng, names, depth - 1)
    right = random_nd_formula(rng, names, depth - 1)
    return And(left, right) if kind == "and" else Or(left, right)


def derive(rng, target, fuel, supply):
    """A derivation of target, schema-valid by construction."""
    if fuel <= 0:
        return nd.Assume(target)
    moves = ["assume"]
    if isinstance(target, And):
        moves += ["and_i"] * 2
    if isinstance(target, Or):
        moves += ["or_i"] * 2
        if (isinstance(target.right, Neg) and isinstance(target.right.body, Box)
                and target.right.body.body == target.left):
            moves += ["ma"] * 2
    if isinstance(target, Neg):
        body = target.body
        if isinstance(body, And):
            moves += ["neg_and_i"] * 2
        if isinstance(body, Or):
            moves += ["neg_or_i"] * 2
        if isinstance(body, Neg):
            moves += ["neg_neg_i"] * 2
        if isinstance(body, Box):
            moves += ["neg_box_i"] * 2
        moves += ["neg_or_e", "neg_box_e"]
    if isinstance(target, Box):
        moves += ["box_i"] * 2
    if isinstance(target, Bot):
        moves += ["bot_i"] * 2
    moves += ["and_e", "box_e", "neg_neg_e", "bot_e", "or_e", "neg_and_e"]
    move = rng.choice(moves)
    names = ["p", "q", "r"]
    side = random_nd_formula(rng, names, 1)

    if move == "assume":
        return nd.Assume(target)
    if move == "ma":
        return nd.ma(target.left)
    if move == "and_i":
        return nd.and_i(derive(rng, target.left, fuel - 1, supply),
                        derive(rng, target.right, fuel - 1, supply))
    if move == "or_i":
        if rng.random() < 0.5:
            return nd.or_i1(derive(rng, target.left, fuel - 1, supply), target.right)
        return nd.or_i2(derive(rng, target.right, fuel - 1, supply), target.left)
    if move == "neg_and_i":
        body = target.body
        if rng.random() < 0.5:
            return nd.neg_and_i1(derive(rng, Neg(body.left), fuel - 1, supply), body.right)
        return nd.neg_and_i2(derive(rng, Neg(body.right), fuel - 1, supply), body.left)
    if move == "neg_or_i":
        body = target.body
        return nd.neg_or_i(derive(rng, Neg(body.left), fuel - 1, supply),
                           derive(rng, Neg(body.right), fuel - 1, supply))
    if move == "neg_neg_i":
        return nd.neg_neg_i(derive(rng, target.body.body, fuel - 1, supply))
    if move == "neg_box_i":
        return nd.neg_box_i(derive(rng, Neg(target.body.body), fuel - 1, supply))
    if move == "box_i":
        body = target.body
        main = derive(rng, body, fuel - 1, supply)
        marker = supply.fresh()
        if rng.random() < 0.5:
            refutation = nd.bot_i(nd.and_i(nd.Assume(Neg(body), marker),
                                           derive(rng, Box(body), fuel - 2, supply)))
        else:
            refutation = derive(rng, Bot(), fuel - 2, supply)
        return nd.box_i(main, refutation, marker)
    if move == "bot_i":
        g = random_nd_formula(rng, names, 1)
        return nd.bot_i(derive(rng, And(Neg(g), Box(g)), fuel - 1, supply))
    if move == "and_e":
        if rng.random() < 0.5:
            return nd.and_e1(derive(rng, And(target, side), fuel - 1, supply))
        return nd.and_e2(derive(rng, And(side, target), fuel - 1, supply))
    if move == "box_e":
        return nd.box_e(derive(rng, Box(target), fuel - 1, supply))
    if move == "neg_neg_e":
        return nd.neg_neg_e(derive(rng, Neg(Neg(target)), fuel - 1, supply))
    if move == "bot_e":
        return nd.bot_e(derive(rng, Bot(), fuel - 1, supply), target)
    if move == "neg_or_e":
        body = target.body
        if rng.random() < 0.5:
            return nd.neg_or_e1(derive(rng, Neg(Or(body, side)), fuel - 1, supply))
        return nd.neg_or_e2(derive(rng, Neg(Or(side, body)), fuel - 1, supply))
    if move == "neg_box_e":
        body = target.body
        return nd.neg_box_e(derive(rng, Neg(Box(body)), fuel - 1, supply),
                            derive(rng, body, fuel - 2, supply))
    if move == "or_e":
        left = random_nd_formula(rng, names, 1)
        right = random_nd_formula(rng, names, 1)
        major = derive(rng, Or(left, right), fuel - 2, supply)
        minor1 = derive(rng, target, fuel - 2, supply)
        minor2 = derive(rng, target, fuel - 2, supply)
        return nd.or_e(major, minor1, minor2, supply.fresh(), supply.fresh())
    if move == "neg_and_e":
        left = random_nd_formula(rng, names, 1)
        right = random_nd_formula(rng, names, 1)
        major = derive(rng, Neg(And(left, right)), fuel - 2, supply)
        minor1 = derive(rng, target, fuel - 2, supply)
        minor2 = derive(rng, target, fuel - 2, supply)
        return nd.neg_and_e(major, minor1, minor2, supply.fresh(), supply.fresh())
    raise AssertionError(move)


def random_proof(rng, fuel=4, depth=2):
    supply = MarkerSupply()
    goal = random_nd_formula(rng, ["p", "q", "r"], depth)
    return derive(rng, goal, fuel, supply)


def proof_size(t):
    if isinstance(t, nd.Rule):
        return 1 + sum(proof_size(p) for p in t.premises)
    return 1


DETOUR_KINDS = (
    "and1", "and2", "or1", "or2", "neg_and1", "neg_and2",
    "neg_or1", "neg_or2", "neg_neg", "box", "neg_box",
)


def inject_detour(rng, d, supply, kind=None):
    """Wrap d so its conclusion is introduced and immediately eliminated."""
    chi = nd.conclusion_of(d)
    names = ["p", "q", "r"]
    side = random_nd_formula(rng, names, 1)
    kinds = ["and1", "and2", "or1", "or2", "neg_neg", "box"]
    if isinstance(chi, Neg):
        kinds += ["neg_and1", "neg_and2", "neg_or1", "neg_or2", "neg_box"]
    if kind is None:
        kind = rng.choice(kinds)
    elif kind not in kinds:
        return None
    if kind == "and1":
        return nd.and_e1(nd.and_i(d, nd.Assume(side)))
    if kind == "and2":
        return nd.and_e2(nd.and_i(nd.Assume(side), d))
    if kind == "or1":
        u, v = supply.fresh(), supply.fresh()
        return nd.or_e(nd.or_i1(d, side), nd.Assume(chi, u), nd.Assume(chi), u, v)
    if kind == "or2":
        u, v = supply.fresh(), supply.fresh()
        return nd.or_e(nd.or_i2(d, side), nd.Assume(chi), nd.Assume(chi, v), u, v)
    if kind == "neg_neg":
        return nd.neg_neg_e(nd.neg_neg_i(d))
    if kind == "box":
        return nd.box_e(nd.box_i(d, nd.Assume(Bot()), supply.fresh()))
    # the rest require chi to be a negation ~a
    a = chi.body
    if kind == "neg_and1":
        u, v = supply.fresh(), supply.fresh()
        return nd.neg_and_e(nd.neg_and_i1(d, side), nd.Assume(chi, u), nd.Assume(chi), u, v)
    if kind == "neg_and2":
        u, v = supply.fresh(), supply.fresh()
        return nd.neg_and_e(nd.neg_and_i2(d, side), nd.Assume(chi), nd.Assume(chi, v), u, v)
    if kind == "neg_or1":
        return nd.neg_or_e1(nd.neg_or_i(d, nd.Assume(Neg(side))))
    if kind == "neg_or2":
        return nd.neg_or_e2(nd.neg_or_i(nd.Assume(Neg(side)), d))
    if kind == "neg_box":
        return nd.neg_box_e(nd.neg_box_i(d), nd.Assume(a))
    raise AssertionError(kind)


def inject_permutation(rng, d, supply):
    """Route d's conclusion through a disjunction elimination whose classes
    are both used, then eliminate the compound on the far side; normalization
    must permute the elimination into the minors.  Both class assumptions sit
    under plain eliminations, so no other conversion can empty them first."""
    chi = nd.conclusion_of(d)
    a = Var(rng.choice(["p", "q", "r"]))
    s = Var(rng.choice(["p", "q", "r"]))
    u, v = supply.fresh(), supply.fresh()
    minor1 = nd.and_i(nd.Assume(a, u), d)
    minor2 = nd.and_i(nd.and_e2(nd.Assume(And(s, a), v)), nd.Assume(chi))
    major = nd.Assume(Or(a, And(s, a)))
    return nd.and_e2(nd.or_e(major, minor1, minor2, u, v))


def inject_removal(rng, d, supply):
    """Route d's conclusion through a disjunction elimination with vacuous
    discharges on both sides; normalization must drop the elimination."""
    chi = nd.conclusion_of(d)
    a = Var(rng.choice(["p", "q", "r"]))
    b = Var(rng.choice(["p", "q", "r"]))
    u, v = supply.fresh(), supply.fresh()
    minor1 = nd.and_i(nd.Assume(a), d)
    minor2 = nd.and_i(nd.Assume(a), nd.Assume(chi))
    major = nd.Assume(Or(a, b))
    return nd.and_e2(nd.or_e(major, minor1, minor2, u, v))


def inject_bot_detour(rng, d, supply):
    """Replace d's conclusion with a bot elimination into a compound target,
    so atomize_bot has work to do; d itself is kept inside a conjunction."""
    chi = nd.conclusion_of(d)
    g = Var(rng.choice(["p", "q", "r"]))
    falsum = nd.bot_i(nd.and_i(nd.Assume(Neg(g)), nd.Assume(Box(g))))
    compound = rng.choice([And(g, g), Or(g, Neg(g)), Box(g), Neg(And(g, g))])
    return nd.and_e2(nd.and_i(nd.bot_e(falsum, compound), d))


def random_injected_proof(rng, fuel=3):
    """A proof wrapped with one to three random injections."""
    supply = MarkerSupply("j")
    d = random_proof(rng, fuel=fuel)
    for _ in range(rng.randint(1, 3)):
        pick = rng.choice(["detour", "detour", "permutation", "removal", "bot"])
        if pick == "detour":
            wrapped = inject_detour(rng, d, supply)
            if wrapped is not None:
                d = wrapped
        elif pick == "permutation":
            d = inject_permutation(rng, d, supply)
        elif pick == "removal":
            d = inject_removal(rng, d, supply)
        else:
            d = inject_bot_detour(rng, d, supply)
    return d
