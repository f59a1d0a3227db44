"""Hypothesis strategies shared by the test modules."""

from fractions import Fraction

from hypothesis import strategies as st

small_int = st.integers(min_value=-9, max_value=9)
rationals = st.builds(Fraction, small_int, st.integers(min_value=1, max_value=5))


def matrices(rows, cols, elements=rationals):
    return st.lists(st.lists(elements, min_size=cols, max_size=cols), min_size=rows, max_size=rows)


@st.composite
def any_matrix(draw, max_rows=4, max_cols=5):
    r = draw(st.integers(1, max_rows))
    c = draw(st.integers(1, max_cols))
    return draw(matrices(r, c))


def nonzero_vectors(n):
    return st.lists(small_int, min_size=n, max_size=n).filter(lambda v: any(v))


def random_gl(rng, n, height=5):
    from grassfold.exactlin import ExactMatrix, det

    while True:
        g = ExactMatrix.from_rows([[rng.randint(-height, height) for _ in range(n)] for _ in range(n)])
        if det(g) != 0:
            return g


def extension_sample(rng, st_, i, height=64):
    """Point of shape (p, q+1): a moved copy of the witness of ``st_`` with a random column at i."""
    from fractions import Fraction

    from grassfold.exactlin import ExactMatrix
    from grassfold.grassmann import GrassPoint

    g = random_gl(rng, st_.p)
    cols = (g @ st_.witness.matrix()).columns()
    new = [Fraction(rng.randint(-height, height), rng.randint(1, height)) for _ in range(st_.p)]
    cols.insert(i, new)
    return GrassPoint(st_.p, st_.q + 1, ExactMatrix.from_columns(cols, st_.p))


def mixed_samples(rng, st_, i, count, height=64):
    """Half extensions of the witness, half uniformly random normal-form points."""
    from grassfold.grassmann import random_point

    out = []
    for k in range(count):
        if k % 2 == 0:
            out.append(extension_sample(rng, st_, i, height))
        else:
            out.append(random_point(rng, st_.p, st_.q + 1, height))
    return out
