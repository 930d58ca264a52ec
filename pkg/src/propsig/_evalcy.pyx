# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False
"""Cython evaluator kernel.

Mirror of propsig._evalpy: identical semantics and fuel schedule over
the flat instruction form, with C-typed program counters, fuel, and
64-bit wrapping arithmetic.  See _evalpy for the schedule contract.
"""

from propsig.values import (
    DIV_BY_ZERO,
    EMPTY_LIST_ACCESS,
    FUEL_EXHAUSTED,
    INDEX_OUT_OF_BOUNDS,
    ClosureValue,
    EvalCrash,
    Ok,
    OutOfFuel,
    RunError,
    values_equal,
)

KERNEL_NAME = "cython"

cdef enum:
    C_VAR = 0
    C_INT = 1
    C_BOOL = 2
    C_NIL = 3
    C_LAMBDA = 4
    C_APPLY = 5
    C_MKPAIR = 6
    C_FST = 7
    C_SND = 8


cdef class _State:
    cdef long long fuel


cdef class _Closure:
    cdef const long long[::1] mv
    cdef Py_ssize_t pc
    cdef tuple env


# virtual subclass: first-order helpers treat these as function values
ClosureValue.register(_Closure)


cdef inline long long _wadd(long long a, long long b):
    return <long long>(<unsigned long long>a + <unsigned long long>b)


cdef inline long long _wsub(long long a, long long b):
    return <long long>(<unsigned long long>a - <unsigned long long>b)


cdef inline long long _wmul(long long a, long long b):
    return <long long>(<unsigned long long>a * <unsigned long long>b)


cdef inline long long _wneg(long long a):
    return <long long>(0 - <unsigned long long>a)


cdef inline int _burn(_State st, long long n) except -1:
    st.fuel -= n
    if st.fuel < 0:
        raise OutOfFuel
    return 0


cdef object _ev(const long long[::1] code, Py_ssize_t pc, tuple env, _State st,
                Py_ssize_t* out):
    cdef long long op = code[pc]
    cdef Py_ssize_t p, n
    cdef object a0, a1
    cdef tuple pair
    cdef _Closure clo
    st.fuel -= 1
    if st.fuel < 0:
        raise OutOfFuel
    if op == C_VAR:
        out[0] = pc + 2
        return env[len(env) - 1 - <Py_ssize_t>code[pc + 1]]
    if op == C_INT:
        out[0] = pc + 2
        return code[pc + 1]
    if op == C_BOOL:
        out[0] = pc + 2
        return True if code[pc + 1] == 1 else False
    if op == C_NIL:
        out[0] = pc + 1
        return []
    if op == C_APPLY:
        n = <Py_ssize_t>code[pc + 2]
        p = pc + 3
        a0 = a1 = None
        if n >= 1:
            a0 = _ev(code, p, env, st, &p)
        if n >= 2:
            a1 = _ev(code, p, env, st, &p)
        if n >= 3:
            out[0] = p
            return _apply3(<long long>code[pc + 1], a0, a1,
                           _ev(code, p, env, st, out), st)
        out[0] = p
        return _apply(<long long>code[pc + 1], a0, a1, st)
    if op == C_MKPAIR:
        p = pc + 1
        a0 = _ev(code, p, env, st, &p)
        a1 = _ev(code, p, env, st, &p)
        out[0] = p
        return (a0, a1)
    if op == C_FST:
        p = pc + 1
        pair = _ev(code, p, env, st, &p)
        out[0] = p
        return pair[0]
    if op == C_SND:
        p = pc + 1
        pair = _ev(code, p, env, st, &p)
        out[0] = p
        return pair[1]
    if op == C_LAMBDA:
        clo = _Closure.__new__(_Closure)
        clo.mv = code
        clo.pc = pc + 2
        clo.env = env
        out[0] = pc + 2 + <Py_ssize_t>code[pc + 1]
        return clo
    raise AssertionError("bad opcode %d" % op)


cdef object _callc(object f, object arg, _State st):
    cdef _Closure clo = f
    cdef Py_ssize_t dummy = 0
    st.fuel -= 1
    if st.fuel < 0:
        raise OutOfFuel
    return _ev(clo.mv, clo.pc, clo.env + (arg,), st, &dummy)


cdef object _freeze(object v):
    if isinstance(v, list):
        return tuple([_freeze(x) for x in <list>v])
    if isinstance(v, tuple):
        return (_freeze((<tuple>v)[0]), _freeze((<tuple>v)[1]))
    return v


cdef object _apply3(long long cid, object a0, object a1, object a2, _State st):
    # the three-argument components: foldl, foldr, zip_with
    cdef list xs, ys, out
    cdef Py_ssize_t i, n
    cdef object acc
    xs = a0
    if cid == 51:  # foldl
        acc = a1
        for i in range(len(xs)):
            _burn(st, 1)
            acc = _callc(a2, (acc, xs[i]), st)
        return acc
    if cid == 52:  # foldr
        acc = a1
        for i in range(len(xs) - 1, -1, -1):
            _burn(st, 1)
            acc = _callc(a2, (xs[i], acc), st)
        return acc
    if cid == 53:  # zip_with
        ys = a1
        n = len(xs)
        if len(ys) < n:
            n = len(ys)
        out = []
        for i in range(n):
            _burn(st, 1)
            out.append(_callc(a2, (xs[i], ys[i]), st))
        return out
    raise AssertionError("bad component id %d" % cid)


cdef object _apply(long long cid, object a0, object a1, _State st):
    cdef long long x, y, size
    cdef Py_ssize_t n, i
    cdef list xs, ys, out
    if cid == 0:
        return _wadd(a0, a1)
    if cid == 1:
        return _wsub(a0, a1)
    if cid == 2:
        return _wmul(a0, a1)
    if cid == 3:
        x = a0
        y = a1
        if y == 0:
            raise EvalCrash(DIV_BY_ZERO)
        if y == -1:
            return _wneg(x)
        return x // y
    if cid == 4:
        x = a0
        y = a1
        if y == 0:
            raise EvalCrash(DIV_BY_ZERO)
        if y == -1:
            return 0
        return x % y
    if cid == 5:
        return _wneg(<long long>a0)
    if cid == 6:
        x = a0
        return _wneg(x) if x < 0 else x
    if cid == 7:
        x = a0
        y = a1
        return x if x <= y else y
    if cid == 8:
        x = a0
        y = a1
        return x if x >= y else y
    if cid == 9:
        x = a0
        return True if (x & 1) == 0 else False
    if cid == 10:
        return True if <long long>a0 == <long long>a1 else False
    if cid == 11:
        return True if <long long>a0 != <long long>a1 else False
    if cid == 12:
        return True if <long long>a0 < <long long>a1 else False
    if cid == 13:
        return True if <long long>a0 <= <long long>a1 else False
    if cid == 14:
        return True if <long long>a0 > <long long>a1 else False
    if cid == 15:
        return True if <long long>a0 >= <long long>a1 else False
    if cid == 16:
        return True if (a0 is True and a1 is True) else False
    if cid == 17:
        return True if (a0 is True or a1 is True) else False
    if cid == 18:
        return False if a0 is True else True
    if cid == 29:  # cons
        xs = a1
        _burn(st, 1 + len(xs))
        return [a0] + xs
    if cid == 30:  # head
        _burn(st, 1)
        xs = a0
        if len(xs) == 0:
            raise EvalCrash(EMPTY_LIST_ACCESS)
        return xs[0]
    if cid == 31:  # tail
        xs = a0
        _burn(st, len(xs))
        if len(xs) == 0:
            raise EvalCrash(EMPTY_LIST_ACCESS)
        return xs[1:]
    if cid == 32:  # last
        xs = a0
        _burn(st, len(xs))
        if len(xs) == 0:
            raise EvalCrash(EMPTY_LIST_ACCESS)
        return xs[len(xs) - 1]
    if cid == 33:  # len
        xs = a0
        _burn(st, len(xs))
        return len(xs)
    if cid == 34:  # reverse
        xs = a0
        _burn(st, len(xs))
        return xs[::-1]
    if cid == 35:  # concat
        xs = a0
        ys = a1
        _burn(st, len(xs) + len(ys))
        return xs + ys
    if cid == 36:  # take
        xs = a0
        _burn(st, len(xs))
        x = a1
        if x < 0:
            x = 0
        return xs[:x]
    if cid == 37:  # drop
        xs = a0
        _burn(st, len(xs))
        x = a1
        if x < 0:
            x = 0
        return xs[x:]
    if cid == 38:  # index
        xs = a0
        _burn(st, len(xs))
        x = a1
        if x < 0 or x >= len(xs):
            raise EvalCrash(INDEX_OUT_OF_BOUNDS)
        return xs[<Py_ssize_t>x]
    if cid == 39:  # contains
        xs = a0
        _burn(st, len(xs))
        return True if a1 in xs else False
    if cid == 40:  # count
        xs = a0
        _burn(st, len(xs))
        n = 0
        for i in range(len(xs)):
            if xs[i] == a1:
                n += 1
        return n
    if cid == 41:  # sum
        xs = a0
        _burn(st, len(xs))
        x = 0
        for i in range(len(xs)):
            x = _wadd(x, <long long>xs[i])
        return x
    if cid == 42:  # product
        xs = a0
        _burn(st, len(xs))
        x = 1
        for i in range(len(xs)):
            x = _wmul(x, <long long>xs[i])
        return x
    if cid == 43:  # maximum
        xs = a0
        _burn(st, len(xs))
        if len(xs) == 0:
            raise EvalCrash(EMPTY_LIST_ACCESS)
        return max(xs)
    if cid == 44:  # minimum
        xs = a0
        _burn(st, len(xs))
        if len(xs) == 0:
            raise EvalCrash(EMPTY_LIST_ACCESS)
        return min(xs)
    if cid == 45:  # sort
        xs = a0
        _burn(st, len(xs))
        return sorted(xs)
    if cid == 46:  # distinct
        xs = a0
        _burn(st, len(xs))
        seen = {}
        for i in range(len(xs)):
            seen.setdefault(_freeze(xs[i]), xs[i])
        return list(seen.values())
    if cid == 47:  # range
        x = a0
        y = a1
        if y <= x:
            size = 0
        else:
            size = _wsub(y, x)
            if size < 0 or size > st.fuel:  # true size may exceed int64 max
                st.fuel = -1
                raise OutOfFuel
        _burn(st, size)
        return list(range(x, y))
    if cid == 48:  # replicate
        x = a0
        if x < 0:
            x = 0
        if x > st.fuel:
            st.fuel = -1
            raise OutOfFuel
        _burn(st, x)
        return [a1] * <Py_ssize_t>x
    if cid == 49:  # map
        xs = a0
        out = []
        for i in range(len(xs)):
            _burn(st, 1)
            out.append(_callc(a1, xs[i], st))
        return out
    if cid == 50:  # filter
        xs = a0
        out = []
        for i in range(len(xs)):
            _burn(st, 1)
            if _callc(a1, xs[i], st) is True:
                out.append(xs[i])
        return out
    if cid == 54:  # for_all
        xs = a0
        for i in range(len(xs)):
            _burn(st, 1)
            if _callc(a1, xs[i], st) is not True:
                return False
        return True
    if cid == 55:  # exists
        xs = a0
        for i in range(len(xs)):
            _burn(st, 1)
            if _callc(a1, xs[i], st) is True:
                return True
        return False
    if cid == 56:  # find_index
        xs = a0
        for i in range(len(xs)):
            _burn(st, 1)
            if _callc(a1, xs[i], st) is True:
                return i
        return -1
    raise AssertionError("bad component id %d" % cid)


def run_with_fuel(code, arg, fuel):
    """(outcome, fuel remaining); the exactness hook for kernel tests."""
    cdef _State st = _State.__new__(_State)
    cdef const long long[::1] mv = code
    cdef Py_ssize_t dummy = 0
    st.fuel = fuel
    try:
        clo = _ev(mv, 0, (), st, &dummy)
        return Ok(_callc(clo, arg, st)), st.fuel
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
    cdef const long long[::1] mv = code
    cdef _State st
    cdef Py_ssize_t dummy
    for x, y in pairs:
        st = _State.__new__(_State)
        st.fuel = fuel
        dummy = 0
        try:
            clo = _ev(mv, 0, (), st, &dummy)
            v = _callc(clo, x, st)
        except (EvalCrash, OutOfFuel):
            return False
        if not values_equal(v, y):
            return False
    return True


def property_abstract(code, pairs, fuel):
    """0 AllTrue / 1 AllFalse / 2 Mixed over pairs, totalizing errors to false."""
    cdef const long long[::1] mv = code
    cdef _State st
    cdef Py_ssize_t dummy
    cdef bint seen_true = False, seen_false = False, val
    for pair in pairs:
        st = _State.__new__(_State)
        st.fuel = fuel
        dummy = 0
        try:
            clo = _ev(mv, 0, (), st, &dummy)
            val = _callc(clo, pair, st) is True
        except (EvalCrash, OutOfFuel):
            val = False
        if val:
            seen_true = True
        else:
            seen_false = True
        if seen_true and seen_false:
            return 2
    return 0 if seen_true else 1
