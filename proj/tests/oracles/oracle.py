#!/usr/bin/env python3
"""Independent reference for the frozen tables in the C++ tests.

Shares no code with the library. Formulas are nested tuples; both truth
relations are evaluated straight from their definitions, sugar included,
with quantifiers bounded by periodicity of the lasso.

    python3 tests/oracles/oracle.py > /tmp/tables.inc

prints the C++ table literals pasted into tests/*_test.cpp.
"""

import functools
import itertools
import random
import sys

# --- syntax ------------------------------------------------------------------

UNARY = {"G", "X", "H", "F", "~"}
BINARY = {"->": "imp", "|": "or", "&": "and", "U": "U"}


def tokenize(s):
    out, i = [], 0
    while i < len(s):
        c = s[i]
        if c.isspace():
            i += 1
        elif s.startswith("->", i):
            out.append("->")
            i += 2
        elif c in "()|&~":
            out.append(c)
            i += 1
        elif c.isalpha():
            j = i
            while j < len(s) and (s[j].isalnum() or s[j] == "_"):
                j += 1
            out.append(s[i:j])
            i = j
        else:
            raise ValueError("bad char %r" % c)
    return out


def parse(s):
    toks = tokenize(s)
    pos = 0

    def f():
        nonlocal pos
        t = toks[pos]
        pos += 1
        if t == "bot":
            return ("bot",)
        if t != "(":
            return ("atom", t)
        if toks[pos] in UNARY:
            op = toks[pos]
            pos += 1
            a = f()
            assert toks[pos] == ")"
            pos += 1
            return ("not", a) if op == "~" else (op, a)
        a = f()
        op = toks[pos]
        pos += 1
        b = f()
        assert toks[pos] == ")"
        pos += 1
        return (BINARY[op], a, b)

    r = f()
    assert pos == len(toks)
    return r


def show(f):
    k = f[0]
    if k == "atom":
        return f[1]
    if k == "bot":
        return "bot"
    if k == "not":
        return "(~ %s)" % show(f[1])
    if k in ("G", "X", "H", "F"):
        return "(%s %s)" % (k, show(f[1]))
    sym = {"imp": "->", "or": "|", "and": "&", "U": "U"}[k]
    return "(%s %s %s)" % (show(f[1]), sym, show(f[2]))


BOT = ("bot",)


def imp(a, b):
    return ("imp", a, b)


def neg(a):
    return imp(a, BOT)


def desugar(f):
    k = f[0]
    if k in ("atom", "bot"):
        return f
    if k == "not":
        return neg(desugar(f[1]))
    if k == "or":
        return imp(neg(desugar(f[1])), desugar(f[2]))
    if k == "and":
        return neg(imp(neg(neg(desugar(f[1]))), neg(desugar(f[2]))))
    if k == "F":
        return neg(("G", neg(desugar(f[1]))))
    if k in ("G", "X", "H"):
        return (k, desugar(f[1]))
    return (k, desugar(f[1]), desugar(f[2]))


def complexity(f):
    k = f[0]
    if k in ("atom", "bot"):
        return 0
    own = 1 if k in ("imp", "G", "X", "U", "H") else 0
    return own + sum(complexity(c) for c in f[1:])


# Local grammar: Al ::= p | bot | Al->Al | G Ah | X Ah ; Ah ::= Al | Ah->Ah | H Ah
def is_al(f):
    k = f[0]
    if k in ("atom", "bot"):
        return True
    if k == "imp":
        return is_al(f[1]) and is_al(f[2])
    if k in ("G", "X"):
        return is_ah(f[1])
    return False


def is_ah(f):
    if is_al(f):
        return True
    k = f[0]
    if k == "imp":
        return is_ah(f[1]) and is_ah(f[2])
    if k == "H":
        return is_ah(f[1])
    return False


def classify(f):
    d = desugar(f)
    if is_al(d):
        return "Local"
    if is_ah(d):
        return "HistOnly"
    return "Neither"


def tr(f):
    k = f[0]
    if k in ("atom", "bot"):
        return f
    if k == "U":
        a, b = tr(f[1]), tr(f[2])
        return ("or", b, ("F", ("and", ("X", b), ("H", a))))
    if k in ("G", "X", "F", "not"):
        return (k, tr(f[1]))
    return (k, tr(f[1]), tr(f[2]))


# --- semantics ---------------------------------------------------------------


class Lasso:
    def __init__(self, stem, loop, val):
        assert len(val) == stem + loop and loop >= 1
        self.s, self.p, self.val = stem, loop, val

    def V(self, n):
        return self.val[n] if n < self.s else self.val[self.s + (n - self.s) % self.p]

    def text(self):
        lines = ["stem %d" % self.s, "loop %d" % self.p]
        for i, cell in enumerate(self.val):
            lines.append("at %d:%s" % (i, "".join(" " + a for a in sorted(cell))))
        return "\\n".join(lines + ["end"]) + "\\n"


def ltl(m, n, f):
    """Truth at position n. Every position >= n is represented in
    [n, max(n, s) + p) because truth is p-periodic from s on."""
    k = f[0]
    top = max(n, m.s) + m.p
    if k == "atom":
        return f[1] in m.V(n)
    if k == "bot":
        return False
    if k == "imp":
        return (not ltl(m, n, f[1])) or ltl(m, n, f[2])
    if k == "not":
        return not ltl(m, n, f[1])
    if k == "or":
        return ltl(m, n, f[1]) or ltl(m, n, f[2])
    if k == "and":
        return ltl(m, n, f[1]) and ltl(m, n, f[2])
    if k == "G":
        return all(ltl(m, j, f[1]) for j in range(n, top))
    if k == "F":
        return any(ltl(m, j, f[1]) for j in range(n, top))
    if k == "X":
        return ltl(m, n + 1, f[1])
    if k == "U":
        for j in range(n, top):
            if ltl(m, j, f[2]):
                return True
            if not ltl(m, j, f[1]):
                return False
        return False
    raise ValueError(k)


def depth(f):
    k = f[0]
    if k in ("atom", "bot"):
        return 0
    return (1 if k in ("G", "X", "F", "H") else 0) + max(depth(c) for c in f[1:])


def hist(m, seq, f):
    """Truth at an observation sequence, clause by clause. The unbounded
    quantifier of G / F runs to a horizon far past every sequence entry."""
    horizon_extra = (m.s + m.p) * (2 * depth(f) + 3)

    @functools.lru_cache(maxsize=None)
    def go(seq, f):
        k = f[0]
        last = seq[-1]
        if k == "atom":
            return f[1] in m.V(last)
        if k == "bot":
            return False
        if k == "imp":
            return (not go(seq, f[1])) or go(seq, f[2])
        if k == "not":
            return not go(seq, f[1])
        if k == "or":
            return go(seq, f[1]) or go(seq, f[2])
        if k == "and":
            return go(seq, f[1]) and go(seq, f[2])
        if k in ("G", "F"):
            top = max(max(seq), m.s) + horizon_extra
            vals = (go(seq + (j,), f[1]) for j in range(last, top + 1))
            return all(vals) if k == "G" else any(vals)
        if k == "X":
            return go(seq + (last + 1,), f[1])
        if k == "H":
            if len(seq) == 1:
                return go(seq, f[1])
            prev = seq[-2]
            return all(go(seq[:-1] + (j,), f[1]) for j in range(prev, last + 1))
        raise ValueError(k)

    return go(tuple(seq), f)


# --- generators --------------------------------------------------------------


def rand_formula(rng, budget, ops, atoms=("p", "q")):
    if budget == 0 or rng.random() < 0.25:
        return ("atom", rng.choice(atoms)) if rng.random() < 0.85 else BOT
    op = rng.choice(ops)
    if op in ("imp", "or", "and", "U"):
        left = rng.randint(0, budget - 1)
        return (op, rand_formula(rng, left, ops, atoms), rand_formula(rng, budget - 1 - left, ops, atoms))
    if op == "not":
        return ("not", rand_formula(rng, budget - 1, ops, atoms))
    return (op, rand_formula(rng, budget - 1, ops, atoms))


def rand_model(rng, max_stem=3, max_loop=3, atoms=("p", "q")):
    s = rng.randint(0, max_stem)
    p = rng.randint(1, max_loop)
    val = [frozenset(a for a in atoms if rng.random() < 0.5) for _ in range(s + p)]
    return Lasso(s, p, val)


def tautology(f):
    atoms = sorted(set(collect_atoms(f)))
    for bits in itertools.product([False, True], repeat=len(atoms)):
        env = dict(zip(atoms, bits))
        if not prop(env, f):
            return False
    return True


def collect_atoms(f):
    if f[0] == "atom":
        yield f[1]
    for c in f[1:]:
        if isinstance(c, tuple):
            yield from collect_atoms(c)


def prop(env, f):
    k = f[0]
    if k == "atom":
        return env[f[1]]
    if k == "bot":
        return False
    if k == "imp":
        return (not prop(env, f[1])) or prop(env, f[2])
    if k == "not":
        return not prop(env, f[1])
    if k == "or":
        return prop(env, f[1]) or prop(env, f[2])
    if k == "and":
        return prop(env, f[1]) and prop(env, f[2])
    raise ValueError(k)


# --- tables ------------------------------------------------------------------


def cstr(s):
    return '"' + s.replace("\\n", "\\n") + '"'


def main():
    rng = random.Random(20240611)
    out = sys.stdout

    # Hand-checked instances first.
    m = Lasso(1, 1, [frozenset({"p"}), frozenset({"q"})])
    assert ltl(m, 0, parse("(p U q)"))
    assert not hist(m, (0, 2), parse("(H p)"))
    assert show(tr(parse("(p U q)"))) == "(q | (F ((X q) & (H p))))"
    assert complexity(parse("((G p) -> (X (p U bot)))")) == 4

    out.write("// formula, complexity, class, desugared\n")
    seen = set()
    while len(seen) < 24:
        f = rand_formula(rng, rng.randint(0, 5), ["imp", "G", "X", "H", "not", "or", "and", "F"])
        s = show(f)
        if s in seen:
            continue
        seen.add(s)
        out.write("{%s, %d, LocalClass::%s, %s},\n" % (cstr(s), complexity(desugar(f)), classify(f), cstr(show(desugar(f)))))

    out.write("\n// ltl source, translation\n")
    seen = set()
    while len(seen) < 16:
        f = rand_formula(rng, rng.randint(1, 5), ["imp", "G", "X", "U", "U", "not", "or"])
        s = show(f)
        if s in seen or "U" not in s:
            continue
        seen.add(s)
        out.write("{%s, %s},\n" % (cstr(s), cstr(show(tr(f)))))

    out.write("\n// model, position, ltl formula, value\n")
    for _ in range(40):
        mm = rand_model(rng)
        f = rand_formula(rng, rng.randint(1, 5), ["imp", "G", "X", "U", "not", "or", "and", "F"])
        n = rng.randint(0, 8)
        v = ltl(mm, n, f)
        assert v == hist(mm, (n,), tr(f)), "oracles disagree"
        out.write("{%s, %d, %s, %s},\n" % (cstr(mm.text()), n, cstr(show(f)), "true" if v else "false"))

    out.write("\n// model, sequence, history formula, value\n")
    for _ in range(40):
        mm = rand_model(rng)
        f = rand_formula(rng, rng.randint(1, 4), ["imp", "G", "X", "H", "H", "not", "and", "F"])
        seq = tuple(rng.randint(0, 8) for _ in range(rng.randint(1, 3)))
        v = hist(mm, seq, f)
        out.write("{%s, {%s}, %s, %s},\n" % (cstr(mm.text()), ",".join(map(str, seq)), cstr(show(f)), "true" if v else "false"))

    out.write("\n// propositional formula, tautology\n")
    fixed = ["(((p -> q) -> p) -> p)", "(p | (~ p))", "((~ (~ p)) -> p)", "(p -> q)",
             "((p & q) -> (q & p))", "((p -> q) -> ((~ q) -> (~ p)))", "(p & (~ p))",
             "(((p -> q) & (q -> r)) -> (p -> r))", "((p | q) -> (p & q))", "bot", "(bot -> p)"]
    for s in fixed:
        out.write("{%s, %s},\n" % (cstr(s), "true" if tautology(parse(s)) else "false"))
    # Random tail, balanced between tautologies and non-tautologies.
    want = {True: 8, False: 6}
    seen = set(fixed)
    while any(want.values()):
        f = rand_formula(rng, rng.randint(3, 7), ["imp", "imp", "not", "or", "and"], atoms=("p", "q", "r"))
        s, t = show(f), tautology(f)
        if s in seen or want[t] == 0:
            continue
        seen.add(s)
        want[t] -= 1
        out.write("{%s, %s},\n" % (cstr(s), "true" if t else "false"))


if __name__ == "__main__":
    main()
