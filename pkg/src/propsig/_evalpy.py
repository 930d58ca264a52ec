"""Pure-Python evaluator kernel.

Interprets the flat instruction form produced by evalcore.compile_expr.
The Cython kernel (_evalcy.pyx) implements the identical semantics and
fuel schedule; the cross-kernel test suite asserts bit-equal outcomes
and bit-equal remaining fuel.

Fuel schedule: 1 per node visit and per closure call; list components
additionally charge per element (the full length of each list argument;
range/replicate charge the output size before allocating it).  Charges
land before validity checks, which land before computation.
"""

from __future__ import annotations

from .ast import wrap64
from .values import (
    DIV_BY_ZERO,
    EMPTY_LIST_ACCESS,
    FUEL_EXHAUSTED,
    INDEX_OUT_OF_BOUNDS,
    ClosureValue,
    EvalCrash,
    Ok,
    OutOfFuel,
    RunError,
)

KERNEL_NAME = "pure"

# flat-code opcodes
C_VAR, C_INT, C_BOOL, C_NIL, C_LAMBDA, C_APPLY, C_MKPAIR, C_FST, C_SND = range(9)


class _State:
    __slots__ = ("fuel",)

    def __init__(self, fuel):
        self.fuel = fuel

    def burn(self, n):
        self.fuel -= n
        if self.fuel < 0:
            raise OutOfFuel


class _Closure(ClosureValue):
    __slots__ = ("code", "pc", "env")

    def __init__(self, code, pc, env):
        self.code = code
        self.pc = pc
        self.env = env


def _eval(code, pc, env, st):
    """Returns (value, pc past this subexpression)."""
    op = code[pc]
    st.fuel -= 1
    if st.fuel < 0:
        raise OutOfFuel
    if op == C_VAR:
        return env[len(env) - 1 - code[pc + 1]], pc + 2
    if op == C_INT:
        return code[pc + 1], pc + 2
    if op == C_BOOL:
        return code[pc + 1] == 1, pc + 2
    if op == C_NIL:
        return [], pc + 1
    if op == C_APPLY:
        cid = code[pc + 1]
        p = pc + 3
        vals = []
        for _ in range(code[pc + 2]):
            v, p = _eval(code, p, env, st)
            vals.append(v)
        return _apply(cid, vals, st), p
    if op == C_MKPAIR:
        a, p = _eval(code, pc + 1, env, st)
        b, p = _eval(code, p, env, st)
        return (a, b), p
    if op == C_FST:
        v, p = _eval(code, pc + 1, env, st)
        return v[0], p
    if op == C_SND:
        v, p = _eval(code, pc + 1, env, st)
        return v[1], p
    if op == C_LAMBDA:
        return _Closure(code, pc + 2, env), pc + 2 + code[pc + 1]
    raise AssertionError(f"bad opcode {op}")


def _call(clo, arg, st):
    st.fuel -= 1
    if st.fuel < 0:
        raise OutOfFuel
    v, _ = _eval(clo.code, clo.pc, clo.env + (arg,), st)
    return v


def _freeze(v):
    if isinstance(v, list):
        return tuple(_freeze(x) for x in v)
    if isinstance(v, tuple):
        return (_freeze(v[0]), _freeze(v[1]))
    return v


def _apply(cid, a, st):
    # arithmetic
    if cid == 0:
        return wrap64(a[0] + a[1])
    if cid == 1:
        return wrap64(a[0] - a[1])
    if cid == 2:
        return wrap64(a[0] * a[1])
    if cid == 3:
        if a[1] == 0:
            raise EvalCrash(DIV_BY_ZERO)
        return wrap64(a[0] // a[1])
    if cid == 4:
        if a[1] == 0:
            raise EvalCrash(DIV_BY_ZERO)
        return a[0] % a[1]
    if cid == 5:
        return wrap64(-a[0])
    if cid == 6:
        return wrap64(abs(a[0]))
    if cid == 7:
        return a[0] if a[0] <= a[1] else a[1]
    if cid == 8:
        return a[0] if a[0] >= a[1] else a[1]
    if cid == 9:
        return (a[0] & 1) == 0
    # comparisons
    if cid == 10:
        return a[0] == a[1]
    if cid == 11:
        return a[0] != a[1]
    if cid == 12:
        return a[0] < a[1]
    if cid == 13:
        return a[0] <= a[1]
    if cid == 14:
        return a[0] > a[1]
    if cid == 15:
        return a[0] >= a[1]
    # booleans
    if cid == 16:
        return a[0] and a[1]
    if cid == 17:
        return a[0] or a[1]
    if cid == 18:
        return not a[0]
    # lists
    if cid == 29:  # cons
        xs = a[1]
        st.burn(1 + len(xs))
        return [a[0]] + xs
    if cid == 30:  # head
        st.burn(1)
        if not a[0]:
            raise EvalCrash(EMPTY_LIST_ACCESS)
        return a[0][0]
    if cid == 31:  # tail
        xs = a[0]
        st.burn(len(xs))
        if not xs:
            raise EvalCrash(EMPTY_LIST_ACCESS)
        return xs[1:]
    if cid == 32:  # last
        xs = a[0]
        st.burn(len(xs))
        if not xs:
            raise EvalCrash(EMPTY_LIST_ACCESS)
        return xs[-1]
    if cid == 33:  # len
        st.burn(len(a[0]))
        return len(a[0])
    if cid == 34:  # reverse
        st.burn(len(a[0]))
        return a[0][::-1]
    if cid == 35:  # concat
        st.burn(len(a[0]) + len(a[1]))
        return a[0] + a[1]
    if cid == 36:  # take
        xs, k = a
        st.burn(len(xs))
        return xs[: k if k > 0 else 0]
    if cid == 37:  # drop
        xs, k = a
        st.burn(len(xs))
        return xs[k if k > 0 else 0 :]
    if cid == 38:  # index
        xs, k = a
        st.burn(len(xs))
        if k < 0 or k >= len(xs):
            raise EvalCrash(INDEX_OUT_OF_BOUNDS)
        return xs[k]
    if cid == 39:  # contains
        xs, x = a
        st.burn(len(xs))
        return x in xs
    if cid == 40:  # count
        xs, x = a
        st.burn(len(xs))
        n = 0
        for y in xs:
            if y == x:
                n += 1
        return n
    if cid == 41:  # sum
        st.burn(len(a[0]))
        return wrap64(sum(a[0]))
    if cid == 42:  # product
        st.burn(len(a[0]))
        acc = 1
        for x in a[0]:
            acc = wrap64(acc * x)
        return acc
    if cid == 43:  # maximum
        st.burn(len(a[0]))
        if not a[0]:
            raise EvalCrash(EMPTY_LIST_ACCESS)
        return max(a[0])
    if cid == 44:  # minimum
        st.burn(len(a[0]))
        if not a[0]:
            raise EvalCrash(EMPTY_LIST_ACCESS)
        return min(a[0])
    if cid == 45:  # sort
        st.burn(len(a[0]))
        return sorted(a[0])
    if cid == 46:  # distinct
        xs = a[0]
        st.burn(len(xs))
        seen = {}
        for x in xs:
            seen.setdefault(_freeze(x), x)
        return list(seen.values())
    if cid == 47:  # range
        lo, hi = a
        size = hi - lo if hi > lo else 0
        st.burn(size)
        return list(range(lo, hi))
    if cid == 48:  # replicate
        k, x = a
        size = k if k > 0 else 0
        st.burn(size)
        return [x] * size
    # higher-order
    if cid == 49:  # map
        xs, f = a
        out = []
        for x in xs:
            st.burn(1)
            out.append(_call(f, x, st))
        return out
    if cid == 50:  # filter
        xs, f = a
        out = []
        for x in xs:
            st.burn(1)
            if _call(f, x, st) is True:
                out.append(x)
        return out
    if cid == 51:  # foldl
        xs, acc, f = a
        for x in xs:
            st.burn(1)
            acc = _call(f, (acc, x), st)
        return acc
    if cid == 52:  # foldr
        xs, acc, f = a
        for x in reversed(xs):
            st.burn(1)
            acc = _call(f, (x, acc), st)
        return acc
    if cid == 53:  # zip_with
        xs, ys, f = a
        out = []
        for x, y in zip(xs, ys):
            st.burn(1)
            out.append(_call(f, (x, y), st))
        return out
    if cid == 54:  # for_all
        xs, f = a
        for x in xs:
            st.burn(1)
            if _call(f, x, st) is not True:
                return False
        return True
    if cid == 55:  # exists
        xs, f = a
        for x in xs:
            st.burn(1)
            if _call(f, x, st) is True:
                return True
        return False
    if cid == 56:  # find_index
        xs, f = a
        for i, x in enumerate(xs):
            st.burn(1)
            if _call(f, x, st) is True:
                return i
        return -1
    raise AssertionError(f"bad component id {cid}")


def run_with_fuel(code, arg, fuel):
    """(outcome, fuel remaining); the exactness hook for kernel tests."""
    st = _State(fuel)
    try:
        clo, _ = _eval(code, 0, (), st)
        return Ok(_call(clo, arg, st)), st.fuel
    except EvalCrash as err:
        return RunError(err.kind), st.fuel
    except OutOfFuel:
        return FUEL_EXHAUSTED, -1


def run(code, arg, fuel):
    return run_with_fuel(code, arg, fuel)[0]


def outcomes(code, inputs, fuel):
    """One outcome per input; fuel is per (program, input)."""
    return [run(code, x, fuel) for x in inputs]


def check_pairs(code, pairs, fuel):
    """True iff the program maps every input to its expected output."""
    from .values import values_equal

    for x, y in pairs:
        out = run(code, x, fuel)
        if not isinstance(out, Ok) or not values_equal(out.value, y):
            return False
    return True


def property_abstract(code, pairs, fuel):
    """0 AllTrue / 1 AllFalse / 2 Mixed over pairs, totalizing errors to false."""
    seen_true = seen_false = False
    for pair in pairs:
        out = run(code, pair, fuel)
        if isinstance(out, Ok) and out.value is True:
            seen_true = True
        else:
            seen_false = True
        if seen_true and seen_false:
            return 2
    return 0 if seen_true else 1
