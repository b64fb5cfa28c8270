"""High-frequency growth counterexample: data, quintic normal-form terms,
remainder bounds, the t*N^2 growth experiment, and a numeric cross-check.

Everything here works with the renormalized flow's second Picard iterate at
fifth order in the data amplitude.  For data v(0) = delta * v0 the solution
expands as v = delta*v1 + delta^3*w3 + delta^5*w5 + ..., and w5 is a sum of
closed-form double oscillatory integrals over frequency tuples drawn from
the (finite) support of v0:

    w5(t, n) = sum  C_X(n) K_X * C_Y(n_s) K_Y * v0^5
               * exp(i t mu(n)) * I2(phi_out, phi_in, t)

with C = 10i*freq for the two cubic terms, K the respective kernels, and

    I2(a, b, t) = int_0^t e^{i a t'} E_{t'}(b) dt',
    E_t(b)      = int_0^t e^{i b s} ds = t e^{i t b/2} sinc(t b/2).

Integration by parts in t' splits each tuple into a boundary piece and a
distributed piece (valid when phi_out != 0); the distributed pieces are the
quintic normal-form terms.  Reported norms use the structure-only
normalization (the 10i prefactors dropped):

    structure_tuple = (n * n_s * K_X * K_Y / phi_out) * v0^5 * E_t(phi_out+phi_in)

All phases are exact integers (arbitrary precision), so resonant tuples are
detected exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .equations import EquationParams, RenormalizedTerms, dispersion_mu
from .errors import ConfigurationError, ConditioningError, ParameterError
from .spectral import GridSpec, SpectralField

# ---------------------------------------------------------------------------
# Exact oscillatory primitives
# ---------------------------------------------------------------------------

def osc_single(phi, t: float) -> complex:
    """E_t(phi) = (e^{i t phi} - 1)/(i phi), with the phi = 0 limit t.

    Computed as t * e^{i t phi / 2} * sinc(t phi / 2), which is exact and
    cancellation-free; |E_t| <= min(t, 2/|phi|) always.
    """
    theta = 0.5 * t * float(phi)
    if theta == 0.0:
        val = complex(t)
    else:
        val = t * np.exp(1j * theta) * np.sinc(theta / np.pi)
    bound = min(t, 2.0 / abs(float(phi))) if phi != 0 else t
    assert abs(val) <= bound * (1.0 + 1e-12), "oscillatory primitive bound violated"
    return complex(val)


def osc_double(a, b, t: float) -> complex:
    """I2(a, b, t) = int_0^t e^{i a t'} E_{t'}(b) dt', exact closed form."""
    if b == 0:
        if a == 0:
            return 0.5 * t * t
        af = float(a)
        eiat = np.exp(1j * af * t)
        return complex(t * eiat / (1j * af) + (eiat - 1.0) / af**2)
    return (osc_single(a + b, t) - osc_single(a, t)) / (1j * float(b))


# ---------------------------------------------------------------------------
# Counterexample data
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CounterexampleSpec:
    """Low+high frequency data of the growth experiment.

    C5: a_n = 1 at n in {-2,-1,1,2}, N^{-s} at n in {N-1, N}.
    C3: a_n = 1 at n in {-1, 1},     N^{-s} at n = N.
    The field is deliberately not Hermitian-symmetric.
    """

    N: int
    s: float = 1.0
    variant: str = "C5"
    t: float = 1.0e-4
    d1: int = 0
    d2: int = 0

    def __post_init__(self):
        if self.N < 8:
            raise ConfigurationError("counterexample requires N >= 8")
        if self.s <= 0:
            raise ParameterError("s must be positive")
        if not 0.0 < self.t < 1.0:
            raise ParameterError("t must lie in (0, 1)")
        if self.variant not in ("C5", "C3"):
            raise ConfigurationError(f"unknown variant {self.variant!r}")


def counterexample_support(spec: CounterexampleSpec) -> dict:
    """Mapping n -> a_n of the chosen variant."""
    hi = spec.N ** (-spec.s)
    if spec.variant == "C5":
        return {-2: 1.0, -1: 1.0, 1: 1.0, 2: 1.0, spec.N - 1: hi, spec.N: hi}
    return {-1: 1.0, 1: 1.0, spec.N: hi}


def build_counterexample_data(spec: CounterexampleSpec, grid: GridSpec) -> SpectralField:
    if grid.max_mode < spec.N:
        raise ConfigurationError(
            f"grid max_mode={grid.max_mode} cannot hold the N={spec.N} mode"
        )
    f = SpectralField.zeros(grid)
    for n, a in counterexample_support(spec).items():
        f.coeff[n + grid.max_mode] = a
    return f


def symmetrized_support(support: dict) -> dict:
    """Hermitian part (a_n + conj(a_{-n}))/2, a real field's coefficients."""
    keys = set(support) | {-n for n in support}
    return {
        n: 0.5 * (support.get(n, 0.0) + np.conj(support.get(-n, 0.0))) for n in keys
    }


def hs_norm_of_map(values: dict, s: float) -> float:
    return math.sqrt(
        sum((1.0 + n * n) ** s * abs(v) ** 2 for n, v in values.items())
    )


# ---------------------------------------------------------------------------
# Tuple walking
# ---------------------------------------------------------------------------

_CUBIC_KERNELS = {
    # structure kernels of the two nonresonant cubic terms; both carry the
    # physical prefactor 10 i * (output frequency)
    "cubic2": lambda n1, n2, n3: n3 * n3,
    "cubic3": lambda n1, n2, n3: n2 * n3,
}


def _mu(n: int, spec: CounterexampleSpec):
    return dispersion_mu(int(n), spec.d1, spec.d2)


def _phi3(n, tup, spec):
    return -_mu(n, spec) + sum(_mu(m, spec) for m in tup)


def _a3_ok(n, tup) -> bool:
    return all(m != n for m in tup)


@dataclass
class QuinticTuple:
    """One (outer, slot, inner) contribution to the fifth delta-derivative."""

    n: int
    outer: tuple
    slot: int
    inner: tuple
    x_term: str
    y_term: str
    amp: complex        # product of the five data values
    kernel_x: int
    kernel_y: int
    phi_out: object
    phi_in: object

    @property
    def n_slot(self) -> int:
        return self.outer[self.slot]

    def structure_value(self, t: float) -> complex:
        """Structure-only normal-form value (10i factors dropped):
        (n * n_slot * K_X * K_Y / phi_out) * amp * E_t(phi_out + phi_in)."""
        if self.phi_out == 0:
            raise ZeroDivisionError("outer phase vanishes; tuple not normal-formable")
        k = self.n * self.n_slot * self.kernel_x * self.kernel_y / float(self.phi_out)
        return k * self.amp * osc_single(self.phi_out + self.phi_in, t)

    def physical_value(self, t: float) -> complex:
        """Exact delta^5 coefficient contribution (constants kept), without
        the overall e^{i t mu(n)} prefactor."""
        c = (10j * self.n) * (10j * self.n_slot) * self.kernel_x * self.kernel_y
        return c * self.amp * osc_double(self.phi_out, self.phi_in, t)

    def physical_boundary(self, t: float) -> complex:
        """Boundary piece of the integration by parts (phi_out != 0)."""
        a, b = float(self.phi_out), self.phi_in
        c = (10j * self.n) * (10j * self.n_slot) * self.kernel_x * self.kernel_y
        return c * self.amp * np.exp(1j * a * t) * osc_single(b, t) / (1j * a)

    def physical_distributed(self, t: float) -> complex:
        a = float(self.phi_out)
        c = (10j * self.n) * (10j * self.n_slot) * self.kernel_x * self.kernel_y
        return -c * self.amp * osc_single(self.phi_out + self.phi_in, t) / (1j * a)


def iter_quintic_tuples(
    support: dict,
    spec: CounterexampleSpec,
    outer_terms=("cubic2",),
    inner_terms=("cubic2", "cubic3"),
    slots=(0, 1, 2),
    leaf_filter=None,
):
    """Enumerate every (outer in A3(n), slot, inner in A3(n_slot)) tuple with
    all five leaves in the support (optionally restricted by leaf_filter)."""
    leaves = sorted(support)
    if leaf_filter is not None:
        leaves = [n for n in leaves if leaf_filter(n)]
    for m1 in leaves:
        for m2 in leaves:
            for m3 in leaves:
                inner = (m1, m2, m3)
                n_slot = m1 + m2 + m3
                if not _a3_ok(n_slot, inner):
                    continue
                phi_in = _phi3(n_slot, inner, spec)
                amp_in = support[m1] * support[m2] * support[m3]
                for la in leaves:
                    for lb in leaves:
                        amp = amp_in * support[la] * support[lb]
                        for slot in slots:
                            if slot == 0:
                                outer = (n_slot, la, lb)
                            elif slot == 1:
                                outer = (la, n_slot, lb)
                            else:
                                outer = (la, lb, n_slot)
                            n = la + lb + n_slot
                            if not _a3_ok(n, outer):
                                continue
                            phi_out = _phi3(n, outer, spec)
                            for x in outer_terms:
                                kx = _CUBIC_KERNELS[x](*outer)
                                for y in inner_terms:
                                    ky = _CUBIC_KERNELS[y](*inner)
                                    yield QuinticTuple(
                                        n, outer, slot, inner, x, y, amp,
                                        kx, ky, phi_out, phi_in,
                                    )


# ---------------------------------------------------------------------------
# Structure-normalized quintic terms
# ---------------------------------------------------------------------------

M0_SLOT = 2  # the resonant tuple lives in the third slot (inner on n3)


def m0_tuple(spec: CounterexampleSpec) -> QuinticTuple:
    """The distinguished resonant tuple m0 = (N, 2, -1, -2, 1, N)."""
    if spec.variant != "C5":
        raise ConfigurationError("m0 is defined for the C5 variant")
    support = counterexample_support(spec)
    N = spec.N
    inner = (-2, 1, N)
    outer = (2, -1, N - 1)
    n = N
    amp = (
        support[2] * support[-1] * support[-2] * support[1] * support[N]
    )
    phi_out = _phi3(n, outer, spec)
    phi_in = _phi3(N - 1, inner, spec)
    return QuinticTuple(
        n, outer, M0_SLOT, inner, "cubic2", "cubic2", amp,
        _CUBIC_KERNELS["cubic2"](*outer), _CUBIC_KERNELS["cubic2"](*inner),
        phi_out, phi_in,
    )


def eval_d0(spec: CounterexampleSpec) -> complex:
    """Single-tuple value at m0 (structure-only normalization).

    phi(m0) = 0 exactly, so the integrand is constant and the value is
    linear in t."""
    tup = m0_tuple(spec)
    if tup.phi_out == 0:
        raise ZeroDivisionError("outer phase vanished at m0 (cannot happen for d1 >= 0)")
    return tup.structure_value(spec.t)


def eval_d_full(spec: CounterexampleSpec) -> dict:
    """Full quintic D term: slot-3 distribution with the n3^2-kernel inner
    cubic, exhaustively over the data support.

    Returns {"field": {n: value}, "hs_norm", "d0", "nonresonant_moduli",
    "skipped_outer_resonant"}.
    """
    support = counterexample_support(spec)
    field_vals: dict = {}
    skipped = 0
    d0 = eval_d0(spec)
    moduli_at_N = 0.0
    m0 = m0_tuple(spec)
    weight_N = (1.0 + spec.N**2) ** (spec.s / 2.0)
    for tup in iter_quintic_tuples(
        support, spec, outer_terms=("cubic2",), inner_terms=("cubic2",), slots=(M0_SLOT,)
    ):
        if tup.phi_out == 0:
            skipped += 1
            continue
        v = tup.structure_value(spec.t)
        field_vals[tup.n] = field_vals.get(tup.n, 0.0) + v
        is_m0 = tup.outer == m0.outer and tup.inner == m0.inner
        if not is_m0 and tup.n == spec.N:
            moduli_at_N += weight_N * abs(v)
    d0_hsnorm = weight_N * abs(d0)
    hs_norm = hs_norm_of_map(field_vals, spec.s)
    return {
        "field": field_vals,
        "hs_norm": hs_norm,
        "d0": d0,
        "d0_hsnorm": d0_hsnorm,
        # triangle inequality at the output mode N: |D(N)| >= |D0| - sum of
        # the other tuples' moduli (several share the resonant leg multiset
        # of m0, so the slack can be order one -- reported, never assumed)
        "nonresonant_moduli": moduli_at_N,
        "cancellation_slack": max(0.0, d0_hsnorm - hs_norm),
        "skipped_outer_resonant": skipped,
    }


@dataclass
class NormalFormTermReport:
    N: int
    s: float
    t: float
    d0_hsnorm: float
    d_full_hsnorm: float
    b1: float
    b2: float
    c1: float
    c2: float
    d1_norms: float
    skipped_outer_resonant: int = 0


def eval_appendix_terms(spec: CounterexampleSpec, restricted: bool = False) -> NormalFormTermReport:
    """H^s norms of the normal-form remainder terms B1, B2, C1, C2, D1.

    By default every tuple on the 6-point data support is summed with exact
    oscillatory integrals; restricted=True keeps only data legs with values
    in {1, N}.  The restricted sum reproduces the crude remainder-bound
    computation but misses the phase-resonant tuples supported on the low
    modes {-2,-1,2}, which are what realize the t*max(N^{2-s},1) growth of
    the D1 term (exact time integrals suppress the {1,N} tuples whose total
    phase is large).  Tuples whose outer phase vanishes are skipped and
    counted (the normal form only applies off the resonant set).
    """
    support = counterexample_support(spec)
    leaf_filter = (lambda n: n in (1, spec.N)) if restricted else None
    acc = {("b", "cubic2"): {}, ("b", "cubic3"): {}, ("c", "cubic2"): {}, ("c", "cubic3"): {}, ("d", "cubic3"): {}}
    slot_of = {"b": 0, "c": 1, "d": 2}
    skipped = 0
    for tup in iter_quintic_tuples(
        support, spec, outer_terms=("cubic2",), inner_terms=("cubic2", "cubic3"),
        slots=(0, 1, 2), leaf_filter=leaf_filter,
    ):
        kind = {0: "b", 1: "c", 2: "d"}[tup.slot]
        if kind == "d" and tup.y_term == "cubic2":
            continue  # that is the D term itself, reported separately
        if tup.phi_out == 0:
            skipped += 1
            continue
        key = (kind, tup.y_term)
        v = tup.structure_value(spec.t)
        acc[key][tup.n] = acc[key].get(tup.n, 0.0) + v
    dfull = eval_d_full(spec)
    return NormalFormTermReport(
        N=spec.N,
        s=spec.s,
        t=spec.t,
        d0_hsnorm=dfull["d0_hsnorm"],
        d_full_hsnorm=dfull["hs_norm"],
        b1=hs_norm_of_map(acc[("b", "cubic2")], spec.s),
        b2=hs_norm_of_map(acc[("b", "cubic3")], spec.s),
        c1=hs_norm_of_map(acc[("c", "cubic2")], spec.s),
        c2=hs_norm_of_map(acc[("c", "cubic3")], spec.s),
        d1_norms=hs_norm_of_map(acc[("d", "cubic3")], spec.s),
        skipped_outer_resonant=skipped + dfull["skipped_outer_resonant"],
    )


def eval_resonant_cubic_fifth(spec: CounterexampleSpec) -> float:
    """H^s norm of the fifth delta-derivative of the dropped resonant cubic
    Duhamel term -20i n^3 |v(n)|^2 v(n), with w3 sourced from the two
    nonresonant cubics and from the resonant term itself.

    The self-sourced piece (resonant inside resonant) carries the double
    time integral and produces the reported ~ t^2 N^{6-4s} growth.
    """
    support = counterexample_support(spec)
    out: dict = {}
    # w3 sourced by the nonresonant cubics
    for m1 in support:
        for m2 in support:
            for m3 in support:
                inner = (m1, m2, m3)
                n = m1 + m2 + m3
                if not _a3_ok(n, inner) or n not in support:
                    continue
                phi_in = _phi3(n, inner, spec)
                amp_in = support[m1] * support[m2] * support[m3]
                an = support[n]
                for y in ("cubic2", "cubic3"):
                    ky = _CUBIC_KERNELS[y](*inner)
                    g3 = (10j * n) * ky * amp_in * osc_double(0, phi_in, spec.t)
                    out[n] = out.get(n, 0.0) + (-20j * n**3) * (
                        2.0 * an * np.conj(an) * g3 + an * an * np.conj(g3)
                    )
    # w3 sourced by the resonant term itself: profile -20i n^3 a^2 conj(a) t'
    for n in support:
        a = support[n]
        G = (-20j * n**3) * a * a * np.conj(a)
        half_t2 = 0.5 * spec.t * spec.t
        out[n] = out.get(n, 0.0) + (-20j * n**3) * (
            2.0 * a * np.conj(a) * G + a * a * np.conj(G)
        ) * half_t2
    return hs_norm_of_map(out, spec.s)


# ---------------------------------------------------------------------------
# C3 variant: resonant cubic growth of the unrenormalized flow
# ---------------------------------------------------------------------------

def eval_c3_cubic(spec: CounterexampleSpec) -> dict:
    """First Picard iterate of the u^2 u_xxx term on the C3 data, full
    (unrestricted) cubic sum with pure n^5 dispersion; the quadruple
    (N, 1, -1, N) is phase-resonant and drives ~ t N^3 growth."""
    if spec.variant != "C3":
        raise ConfigurationError("eval_c3_cubic expects the C3 variant")
    support = counterexample_support(spec)
    out: dict = {}
    for m1 in support:
        for m2 in support:
            for m3 in support:
                n = m1 + m2 + m3
                phi = -(n**5) + m1**5 + m2**5 + m3**5
                amp = support[m1] * support[m2] * support[m3]
                val = (m3**3) * amp * osc_single(phi, spec.t)
                out[n] = out.get(n, 0.0) + val
    return {"field": out, "hs_norm": hs_norm_of_map(out, spec.s)}


# ---------------------------------------------------------------------------
# Growth experiment
# ---------------------------------------------------------------------------

@dataclass
class GrowthRow:
    N: int
    s: float
    t: float
    d0_norm: float
    ratio_tN2: float
    b1: float
    b2: float
    c1: float
    c2: float
    d1: float
    slope_running: float


def growth_experiment(Ns, s: float, t: float, variant: str = "C5", d1: int = 0, d2: int = 0):
    """Per-N norms of the resonant quintic term and the remainders, plus the
    least-squares slope of log ||D0|| against log N."""
    rows = []
    logs = []
    for N in Ns:
        spec = CounterexampleSpec(N=int(N), s=s, variant=variant, t=t, d1=d1, d2=d2)
        if variant == "C5":
            rep = eval_appendix_terms(spec)
            d0n = rep.d0_hsnorm
            row = GrowthRow(
                int(N), s, t, d0n, d0n / (t * N**2),
                rep.b1, rep.b2, rep.c1, rep.c2, rep.d1_norms, float("nan"),
            )
        else:
            d0n = eval_c3_cubic(spec)["hs_norm"]
            row = GrowthRow(int(N), s, t, d0n, d0n / (t * N**2), 0, 0, 0, 0, 0, float("nan"))
        logs.append((math.log(N), math.log(d0n)))
        if len(logs) >= 2:
            xs = np.array([a for a, _ in logs])
            ys = np.array([b for _, b in logs])
            row.slope_running = float(np.polyfit(xs, ys, 1)[0])
        rows.append(row)
    xs = np.array([math.log(r.N) for r in rows])
    ys = np.array([math.log(r.d0_norm) for r in rows])
    slope = float(np.polyfit(xs, ys, 1)[0]) if len(rows) >= 2 else float("nan")
    return rows, slope


# ---------------------------------------------------------------------------
# Analytic fifth derivative (direct route) and numeric cross-check
# ---------------------------------------------------------------------------

def fifth_derivative_direct(
    support: dict, spec: CounterexampleSpec, flow: RenormalizedTerms
) -> dict:
    """Coefficient of delta^5 of the flow map at the given data (complex
    support form), assembled from exact double oscillatory integrals.

    Includes the e^{i t mu(n)} prefactor so values compare directly against
    evolved states.
    """
    t = spec.t
    out: dict = {}
    cubics = []
    if flow.cubic2:
        cubics.append("cubic2")
    if flow.cubic3:
        cubics.append("cubic3")
    if cubics:
        for tup in iter_quintic_tuples(
            support, spec, outer_terms=tuple(cubics), inner_terms=tuple(cubics)
        ):
            out[tup.n] = out.get(tup.n, 0.0) + tup.physical_value(t)
    if flow.quintic:
        leaves = sorted(support)
        for i1 in leaves:
            for i2 in leaves:
                for i3 in leaves:
                    for i4 in leaves:
                        for i5 in leaves:
                            tup = (i1, i2, i3, i4, i5)
                            n = sum(tup)
                            if any(m == n for m in tup):
                                continue
                            phi = -_mu(n, spec) + sum(_mu(m, spec) for m in tup)
                            amp = 1.0
                            for m in tup:
                                amp *= support[m]
                            out[n] = out.get(n, 0.0) + (6j * n) * amp * osc_single(phi, t)
    if flow.resonant_cubic:
        _add_resonant_fifth(out, support, spec, cubics)
    # attach the linear phase
    return {n: v * np.exp(1j * float(_mu(n, spec)) * t) for n, v in out.items()}


def _add_resonant_fifth(out, support, spec, cubics):
    """delta^5 pieces involving the resonant cubic -20i n^3 |v|^2 v (both as
    the outer Duhamel term and inside w3)."""
    t = spec.t
    # resonant outer, nonresonant inner
    for m1 in support:
        for m2 in support:
            for m3 in support:
                inner = (m1, m2, m3)
                n = m1 + m2 + m3
                if not _a3_ok(n, inner) or n not in support:
                    continue
                phi_in = _phi3(n, inner, spec)
                amp_in = support[m1] * support[m2] * support[m3]
                for y in cubics:
                    ky = _CUBIC_KERNELS[y](*inner)
                    base = (10j * n) * ky * amp_in
                    an = support[n]
                    out[n] = out.get(n, 0.0) + (-20j * n**3) * (
                        2.0 * an * np.conj(an) * base * osc_double(0, phi_in, t)
                        + an * an * np.conj(base * osc_double(0, phi_in, t))
                    )
    # resonant inner (w3 piece), nonresonant or resonant outer handled via cubics
    for n0 in support:
        a = support[n0]
        w3_amp = (-20j * n0**3) * a * a * np.conj(a)
        for la in support:
            for lb in support:
                for slot in (0, 1, 2):
                    outer = [la, lb]
                    outer.insert(slot, n0)
                    outer = tuple(outer)
                    n = la + lb + n0
                    if not _a3_ok(n, outer):
                        continue
                    phi_out = _phi3(n, outer, spec)
                    for x in cubics:
                        kx = _CUBIC_KERNELS[x](*outer)
                        out[n] = out.get(n, 0.0) + (10j * n) * kx * support[la] * support[
                            lb
                        ] * w3_amp * osc_double(phi_out, 0, t)
    # resonant outer with resonant w3 at the same mode
    for n0 in support:
        a = support[n0]
        g3 = (-20j * n0**3) * a * a * np.conj(a)  # * t' inside the integral
        an = support[n0]
        val = (-20j * n0**3) * (
            2.0 * an * np.conj(an) * g3 + an * an * np.conj(g3)
        ) * (0.5 * t * t)
        out[n0] = out.get(n0, 0.0) + val


def t2_duhamel_fifth(
    support: dict, spec: CounterexampleSpec, inner_terms=("cubic2",), route: str = "direct"
):
    """delta^5 coefficient of the n3^2-kernel cubic Duhamel term alone.

    route="direct" uses I2 closed forms; route="normal_form" assembles the
    boundary + distributed split (skipping and counting phi_out = 0 tuples).
    Returns (field dict with e^{i t mu} prefactor, skipped count).
    """
    t = spec.t
    out: dict = {}
    skipped = 0
    for tup in iter_quintic_tuples(
        support, spec, outer_terms=("cubic2",), inner_terms=tuple(inner_terms)
    ):
        if route == "direct":
            v = tup.physical_value(t)
        else:
            if tup.phi_out == 0:
                skipped += 1
                continue
            v = tup.physical_boundary(t) + tup.physical_distributed(t)
        out[tup.n] = out.get(tup.n, 0.0) + v
    out = {n: v * np.exp(1j * float(_mu(n, spec)) * t) for n, v in out.items()}
    return out, skipped


def numeric_fifth_derivative(
    u0: SpectralField,
    t: float,
    deltas,
    p: EquationParams,
    terms: RenormalizedTerms,
    ctrl=None,
):
    """Fifth divided difference in delta of delta*u0 -> v(t) under the
    renormalized flow (real-field integrator).

    deltas are positive amplitudes; each is run with both signs and the odd
    part is fitted to delta*a1 + delta^3*a3 + delta^5*a5 (+ delta^7
    nuisance).  Returns (SpectralField holding a5 = fifth derivative / 5!,
    report) with a conditioning summary; raises ConditioningError when the
    spread of deltas is degenerate.
    """
    from .integrate import evolve

    deltas = sorted(float(d) for d in deltas)
    if len(deltas) < 3 or len(set(deltas)) != len(deltas) or min(deltas) <= 0:
        raise ConditioningError("need >= 3 distinct positive delta values")
    if max(deltas) / min(deltas) < 1.2:
        raise ConditioningError("delta spread too small for a stable fit")

    finals = {}
    for d in deltas:
        for sgn in (1.0, -1.0):
            scaled = SpectralField(u0.grid, sgn * d * u0.coeff)
            traj = evolve(scaled, t, p, tag="renormalized_5mkdv", ctrl=ctrl, renorm_terms=terms)
            finals[sgn * d] = traj.states[-1]

    odd = np.array([(finals[d] - finals[-d]) / 2.0 for d in deltas])
    even = np.array([(finals[d] + finals[-d]) / 2.0 for d in deltas])
    darr = np.array(deltas)
    powers = [1, 3, 5, 7] if len(deltas) >= 4 else [1, 3, 5]
    V = np.stack([darr**k for k in powers], axis=1)
    coef, res, rank, sv = np.linalg.lstsq(V, odd, rcond=None)
    a5 = coef[powers.index(5)]
    cond = float(sv[0] / sv[-1])
    even_leak = float(np.max(np.abs(even)))
    report = {
        "vandermonde_condition": cond,
        "even_part_max": even_leak,
        "deltas": deltas,
        "powers": powers,
    }
    return SpectralField(u0.grid, a5), report
