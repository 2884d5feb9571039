import itertools

import numpy as np
import pytest

from nielsen import build_group
from nielsen.engine import clear_cache

# filled by test_acceptance, printed at the end of the session
ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[number])


@pytest.fixture(autouse=True, scope="module")
def _fresh_cache():
    clear_cache()
    yield


@pytest.fixture(scope="session")
def d10():
    return build_group("dihedral:5")


@pytest.fixture(scope="session")
def a5():
    return build_group("alt:5")


# ---------------------------------------------------------------- oracles
# Deliberately naive: plain Python tuples and dicts, no numpy tricks, no
# shared code with the engine beyond the multiplication table itself.


def naive_moves(mul, inv, v):
    n = len(v)
    out = []
    for j in range(n):
        for k in range(n):
            if j == k:
                continue
            for s in (1, -1):
                x = v[k] if s == 1 else inv[v[k]]
                w = list(v)
                w[j] = mul[v[j]][x]
                out.append(tuple(w))
                w = list(v)
                w[j] = mul[x][v[j]]
                out.append(tuple(w))
        w = list(v)
        w[j] = inv[v[j]]
        out.append(tuple(w))
    for j, k in itertools.combinations(range(n), 2):
        w = list(v)
        w[j], w[k] = w[k], w[j]
        out.append(tuple(w))
    return out


def naive_generates(mul, order, v):
    seen = {0}
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            for g in v:
                y = mul[x][g]
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return len(seen) == order


def naive_classes(group, n):
    """Nielsen classes as a list of sets of tuples, by plain BFS."""
    mul = group.mul.tolist()
    inv = group.inv.tolist()
    N = group.order
    todo = {v for v in itertools.product(range(N), repeat=n) if naive_generates(mul, N, v)}
    classes = []
    while todo:
        seed = min(todo)
        comp = {seed}
        stack = [seed]
        while stack:
            v = stack.pop()
            for w in naive_moves(mul, inv, v):
                if w not in comp:
                    comp.add(w)
                    stack.append(w)
        todo -= comp
        classes.append(comp)
    return classes


def naive_automorphisms(group):
    """All automorphisms as tuples, by extending images of the generators."""
    mul = group.mul.tolist()
    N = group.order
    gens = list(group.generators)
    # words for every element over gens
    word = {0: ()}
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            for i, g in enumerate(gens):
                y = mul[x][g]
                if y not in word:
                    word[y] = word[x] + (i,)
                    nxt.append(y)
        frontier = nxt
    orders = group.elem_order.tolist()
    out = []
    for images in itertools.product(range(N), repeat=len(gens)):
        if any(orders[a] != orders[g] for a, g in zip(images, gens)):
            continue
        phi = [0] * N
        for x, w in word.items():
            y = 0
            for i in w:
                y = mul[y][images[i]]
            phi[x] = y
        if len(set(phi)) != N:
            continue
        if all(phi[mul[a][b]] == mul[phi[a]][phi[b]] for a in range(N) for b in range(N)):
            out.append(tuple(phi))
    return out


def naive_weak_classes(group, n):
    classes = naive_classes(group, n)
    index = {}
    for i, comp in enumerate(classes):
        for v in comp:
            index[v] = i
    parent = list(range(len(classes)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for phi in naive_automorphisms(group):
        for i, comp in enumerate(classes):
            v = next(iter(comp))
            j = index[tuple(phi[x] for x in v)]
            a, b = find(i), find(j)
            if a != b:
                parent[a] = b
    return len({find(i) for i in range(len(classes))})


def random_vector(rng, group, n):
    return [int(x) for x in rng.integers(0, group.order, size=n)]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
