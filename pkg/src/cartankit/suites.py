"""Named check suites behind the command-line verbs.

Each suite consumes a loaded problem plus names from it and returns a
Report; residual-vs-tolerance bookkeeping lives in the report records.
"""

from . import ce, cubical, integrate, linalg, reps
from .evaluators import FlatRep, WordEvaluator, ez_product, thinness_check
from .linalg import EXACT, FLOAT
from .report import Report


def _settings_dict(settings):
    return {"mode": settings.mode, "tol": settings.tol, "order": settings.order,
            "series_cap": settings.series_cap, "fd_step": settings.fd_step}


def _new_report(problem) -> Report:
    return Report(settings=_settings_dict(problem.settings))


def check_lie(problem) -> Report:
    report = _new_report(problem)
    report.timed("jacobi", 0.0, lambda: float(problem.algebra.check_jacobi()),
                 {"algebra": problem.algebra.name or "input"})
    return report


def verify_cartan(problem, rep_name) -> Report:
    report = _new_report(problem)
    rep = problem.representation(rep_name)
    tol = 0.0 if rep.mode == EXACT else problem.settings.tol
    res = reps.cartan_residuals(rep)
    for family, value in (("bracket_LL", res.LL), ("bracket_LB", res.LB),
                          ("bracket_BB", res.BB), ("differential_B", res.dB)):
        report.add(f"cartan.{family}", value, tol, {"rep": rep_name})
    return report


def ce_suite(problem, rep_name, flavor) -> Report:
    report = _new_report(problem)
    coeff = problem.lie_representation(rep_name)
    built = (ce.ce_cochain if flavor == "cochain" else ce.ce_chain)(problem.algebra, coeff)
    square = built.complex.differential
    from .graded import compose
    tol = 0.0 if coeff.mode == EXACT else problem.settings.tol
    report.timed(f"ce.{flavor}.d_squared", tol,
                 lambda: compose(square, square).norm(), {"rep": rep_name})
    betti = ce.cohomology_dims(built.complex, problem.settings.tol)
    report.add(f"ce.{flavor}.betti", 0.0, 0.0,
               {"rep": rep_name, "betti": {str(k): v for k, v in sorted(betti.items())}})
    return report, betti


def integrate_word(problem, rep_name, word_name, method="both") -> Report:
    report = _new_report(problem)
    rep = problem.representation(rep_name)
    letters = problem.word(word_name)
    s = problem.settings
    results = {}
    if method in ("series", "both"):
        results["series"] = integrate.integrate_series(rep, letters, max_degree=s.series_cap)
    if method in ("quadrature", "both"):
        if rep.mode != FLOAT:
            raise linalg.ModeError("quadrature requires float mode")
        flat = FlatRep(rep)
        results["quadrature"] = integrate.integrate_quadrature(
            flat, WordEvaluator(flat, letters), s.order)
    from .schemas import dump_operator
    payload = dump_operator(next(iter(results.values())))
    if len(results) == 2:
        cross = (results["series"] - results["quadrature"]).norm()
        report.add("integrate.cross_residual", cross, s.tol,
                   {"rep": rep_name, "word": word_name, "operator": payload})
    else:
        report.add("integrate.computed", 0.0, 0.0,
                   {"rep": rep_name, "word": word_name, "method": method,
                    "operator": payload})
    return report, results


def verify_module(problem, rep_name, word_names) -> Report:
    report = _new_report(problem)
    rep = problem.representation(rep_name)
    if rep.mode != FLOAT:
        raise linalg.ModeError("module law checks run in float mode")
    s = problem.settings
    flat = FlatRep(rep)
    words = {name: problem.word(name) for name in word_names}
    for name, letters in sorted(words.items()):
        report.timed("module.dg_stokes", s.tol,
                     lambda letters=letters: integrate.dg_module_residual(flat, letters, s.order),
                     {"rep": rep_name, "word": name})
        ev = WordEvaluator(flat, letters)
        if thinness_check(ev):
            report.timed("module.thin_vanishing", s.tol,
                         lambda ev=ev: integrate.vanishing_norm(flat, ev, s.order),
                         {"rep": rep_name, "word": name})
        if letters:
            report.timed("module.equivariance", s.tol,
                         lambda letters=letters: integrate.equivariance_residual(
                             flat, letters, [letters[0]]),
                         {"rep": rep_name, "word": name})
    names = sorted(words)
    for a in names:
        for b in names:
            if len(words[a]) + len(words[b]) > 3:
                continue
            report.timed("module.shuffle_multiplicative", 1e-8,
                         lambda a=a, b=b: integrate.multiplicativity_residual(
                             flat, words[a], words[b], s.order),
                         {"rep": rep_name, "left": a, "right": b})
    for name, letters in sorted(words.items()):
        if len(letters) != 1:
            continue
        chain = ez_product(WordEvaluator(flat, letters), WordEvaluator(flat, letters))
        report.timed("module.single_letter_square", 1e-10,
                     lambda chain=chain: integrate.integrate_chain(flat, chain, s.order).norm(),
                     {"rep": rep_name, "word": name})
    tangents = _default_tangents(problem.algebra.n)
    first = words[names[0]] if names else [problem.algebra.basis_vector(0, FLOAT)]
    for p, k in ((2, 1), (2, 2)):
        factors = [first[:1]] * p
        report.timed("module.product_pullback", s.tol,
                     lambda p=p, k=k, factors=factors: integrate.mu_p_residual(
                         flat, factors, tangents[:k, :p, :]),
                     {"rep": rep_name, "p": p, "k": k})
    return report


def _default_tangents(n):
    import numpy as np
    vals = np.array([[[0.7, -0.3, 0.2], [0.1, 0.9, -0.5], [0.4, 0.2, 0.8]],
                     [[-0.2, 0.5, 0.6], [0.8, -0.1, 0.3], [0.2, 0.7, -0.4]],
                     [[0.3, 0.3, -0.7], [-0.6, 0.4, 0.1], [0.5, -0.2, 0.9]]])
    return vals[:, :, :n] if n <= 3 else np.tile(vals, (1, 1, (n + 2) // 3))[:, :, :n]


def roundtrip(problem, rep_name) -> Report:
    report = _new_report(problem)
    rep = problem.representation(rep_name)
    if rep.mode != FLOAT:
        raise linalg.ModeError("roundtrip differentiation runs in float mode")
    s = problem.settings
    e1, e2, ratio = integrate.roundtrip_errors(rep, s.fd_step)
    report.add("roundtrip.recovery", e1, 100.0 * s.fd_step ** 2,
               {"rep": rep_name, "h": s.fd_step})
    report.add("roundtrip.halving_ratio", 3.5 - min(ratio, 3.5), 0.0,
               {"rep": rep_name, "ratio": round(ratio, 3)})
    return report


def adjunction(problem, grep_name, rep_name) -> Report:
    report = _new_report(problem)
    v_rep = problem.lie_representation(grep_name)
    w_rep = problem.representation(rep_name)
    res = reps.adjunction_check(v_rep, w_rep, problem.settings.tol)
    tol = 0.0 if v_rep.mode == EXACT else problem.settings.tol
    if res.precondition_residual > tol:
        report.add("adjunction.precondition", res.precondition_residual, tol,
                   {"rep": rep_name})
        return report
    report.add("adjunction.dimension_match",
               abs(res.dim_cartan_side - res.dim_lie_side), 0.0,
               {"lie_rep": grep_name, "rep": rep_name,
                "dims": [res.dim_cartan_side, res.dim_lie_side]})
    report.add("adjunction.reconstruction", res.reconstruction_residual, tol,
               {"lie_rep": grep_name, "rep": rep_name})
    return report


def cubical_suite(problem, rep_name, word_name) -> Report:
    report = _new_report(problem)
    rep = problem.representation(rep_name)
    if rep.mode != FLOAT:
        raise linalg.ModeError("cubical checks run in float mode")
    s = problem.settings
    flat = FlatRep(rep)
    letters = problem.word(word_name)
    k = len(letters)
    theta = WordEvaluator(flat, letters, domain="cube")
    entry = cubical_entry(flat, theta)
    base = cubical.IntegrationCochain(flat, k, "simplicial", entry, s.order)
    alt = cubical.tau_map(base)
    report.timed("cubical.alternating", 0.0,
                 lambda: cubical.alternating_residual(alt, theta),
                 {"rep": rep_name, "word": word_name})
    for i in range(k):
        for step in (0.2, 0.35, 0.5, 0.65, 0.8):
            report.timed("cubical.subdivision", s.tol,
                         lambda i=i, step=step: cubical.subdivision_invariance_residual(
                             alt, theta, i, step),
                         {"rep": rep_name, "word": word_name, "axis": i, "s": step})
    report.timed("cubical.shuffle_triangulation", s.tol,
                 lambda: cubical.cube_vs_simplex_residual(flat, theta, s.order),
                 {"rep": rep_name, "word": word_name})
    simplex_word = WordEvaluator(flat, letters)
    signed, off_identity = cubical.collapse_reduction_residuals(base, simplex_word)
    report.add("cubical.collapse_identity", signed, s.tol,
               {"rep": rep_name, "word": word_name})
    report.add("cubical.collapse_thin_terms", off_identity, s.tol,
               {"rep": rep_name, "word": word_name})
    return report


def cubical_entry(flat, ev):
    """Deterministic matrix entry where the pullback density is largest."""
    import numpy as np
    from .evaluators import interior_points
    pts = interior_points(ev.k, "cube")
    dens = integrate.density_batch(flat, ev.eval(pts))
    flatidx = int(np.argmax(np.abs(dens[0])))
    return np.unravel_index(flatidx, dens[0].shape)
