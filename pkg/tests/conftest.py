import numpy as np
import pytest
from hypothesis import strategies as st

from ifsod.signal import HybridSignal

finite = st.floats(min_value=-5.0, max_value=5.0, allow_nan=False, allow_infinity=False)


@st.composite
def hybrid_signals(draw, max_n=30, impulses=True, on_grid=True, dts=(0.01, 0.1, 0.5, 1.0)):
    n = draw(st.integers(min_value=1, max_value=max_n))
    dt = draw(st.sampled_from(dts))
    samples = draw(st.lists(finite, min_size=n, max_size=n))
    imps = []
    if impulses:
        slots = draw(st.lists(st.integers(1, n), max_size=3, unique=True))
        for i in sorted(slots):
            w = draw(finite)
            t = i * dt if on_grid else (i - draw(st.floats(0.0, 0.9))) * dt
            imps.append((t, w))
    return HybridSignal(np.array(samples), dt, 0.0, tuple(imps))


def brute_integral(f: HybridSignal, t):
    """A(f)(t) summed term by term, independent of the library's cumulative sums."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    left = f.t_start + f.dt * np.arange(f.n)
    cover = np.clip(t[:, None] - left[None, :], 0.0, f.dt)
    out = cover @ f.samples
    for tj, w in f.impulses:
        out = out + w * (t >= tj - 1e-12 * f.dt)
    return out


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# -- acceptance report ---------------------------------------------------------

ACCEPTANCE: dict[str, list[tuple[bool, str]]] = {}


def record(criterion: str, ok: bool, detail: str) -> None:
    """Store a sub-result; the terminal summary prints one line per criterion."""
    ACCEPTANCE.setdefault(criterion, []).append((bool(ok), detail))
    print(f"{criterion}: {'PASS' if ok else 'FAIL'} - {detail}")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(ACCEPTANCE, key=lambda s: int(s.split()[1])):
        parts = ACCEPTANCE[name]
        ok = all(p for p, _ in parts)
        detail = "; ".join(d for _, d in parts)
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
