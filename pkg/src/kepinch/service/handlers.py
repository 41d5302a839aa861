"""Service handlers: one pure function per endpoint.

The FastAPI app and the in-process CLI client both call these, so the
request/response contract is identical on every transport.
"""

from __future__ import annotations

import numpy as np

from .. import regimes, sampling, sectional, tensor, variational
from ..tensor import ExtremumTag, PinchingProfile
from . import schemas

LEMMA_THREE_INDEX_TOL = 1e-7
LEMMA_GRADIENT_TOL = 1e-6
LEMMA_PROFILE_TOL = 1e-6


def _profile(req: schemas.ProfileParams) -> PinchingProfile:
    return PinchingProfile(req.a, req.b, req.bmod, ExtremumTag.MIN_DIRECTION)


def _direction_json(d: sectional.Direction) -> list[list[float]]:
    return d.to_json()


def run_analyze(req: schemas.AnalyzeRequest) -> schemas.AnalyzeResponse:
    profile = _profile(req)
    summary = sectional.curvature_summary(profile)
    regime = regimes.classify_regimes(profile)
    lap = variational.laplacian_point(profile)
    phi, c_const = variational.phi_and_c(profile)
    phi1, f = variational.guan_yang_values(profile)
    t = None if regime.ball_like else profile.t
    return schemas.AnalyzeResponse(
        profile=schemas.ProfileInfo(
            a=profile.a,
            b=profile.b,
            bmod=profile.bmod,
            phase=req.phase,
            tag=profile.tag.value,
            big_a=profile.A,
            sigma=profile.sigma,
            tau=profile.tau,
            rho=profile.rho,
            t=t,
        ),
        summary=schemas.SummaryInfo(
            k_min=summary.k_min,
            k_max=summary.k_max,
            k_av=summary.k_av,
            locus_min=summary.locus_min.value,
            locus_max=summary.locus_max.value,
            argmin=[_direction_json(d) for d in summary.argmin_dirs],
            argmax=[_direction_json(d) for d in summary.argmax_dirs],
        ),
        regime=schemas.RegimeInfo(
            ratio=regime.ratio,
            t=regime.t,
            ball_like=regime.ball_like,
            nonpositive_bisectional=regime.nonpositive_bisectional,
            in_siu_yang=regime.in_siu_yang,
            in_improved=regime.in_improved,
            in_guan=regime.in_guan,
        ),
        variational=schemas.VariationalInfo(
            lap_r1111=lap.lap_r1111,
            lap_r1212=lap.lap_r1212,
            phi=phi,
            c_const=c_const,
            phi1=phi1,
            f=f,
        ),
    )


def run_constants() -> schemas.ConstantsResponse:
    table = regimes.thresholds()
    return schemas.ConstantsResponse(
        thresholds=[
            schemas.ThresholdRow(name=row.name, chi=row.chi, t_star=row.t_star)
            for row in table.rows()
        ]
    )


def run_sweep(req: schemas.SweepRequest) -> schemas.SweepResponse:
    big_a = 2.0 * req.b - req.a
    if req.steps == 1:
        ts = [req.t_min]
    else:
        ts = list(np.linspace(req.t_min, req.t_max, req.steps))
    rows = []
    for t in ts:
        t = float(t)
        profile = PinchingProfile(req.a, req.b, t * big_a, ExtremumTag.MIN_DIRECTION)
        report = regimes.classify_regimes(profile)
        phi, c_const = variational.phi_and_c(profile)
        ratio = regimes.ratio_t_map(min(max(t, 0.0), 1.0))
        rows.append(
            schemas.SweepRow(
                t=t,
                ratio=ratio,
                in_sy=report.in_siu_yang,
                in_improved=report.in_improved,
                in_guan=report.in_guan,
                phi=phi,
                c_const=c_const,
            )
        )
    return schemas.SweepResponse(rows=rows)


def run_average(req: schemas.AverageRequest) -> schemas.AverageResponse:
    profile = _profile(req)
    built = tensor.build_tensor(profile, req.phase)
    closed = sectional.curvature_summary(profile).k_av
    exact = sectional.average_exact(built)
    mc = sectional.average_mc(built, req.samples, req.seed)
    abs_error = abs(mc.estimate - closed)
    z = abs_error / mc.stderr if mc.stderr > 0.0 else 0.0
    return schemas.AverageResponse(
        closed_form=closed,
        exact_moment=exact,
        estimate=mc.estimate,
        stderr=mc.stderr,
        abs_error=abs_error,
        z_score=z,
    )


def run_oracle(req: schemas.OracleRequest) -> schemas.OracleResponse:
    profile = _profile(req)
    built = tensor.build_tensor(profile, req.phase)
    summary = sectional.curvature_summary(profile)
    brute = sectional.brute_extrema(built, req.grid, req.refine)
    diff = max(abs(brute.k_min - summary.k_min), abs(brute.k_max - summary.k_max))
    doc = built.to_json_dict()
    return schemas.OracleResponse(
        closed=schemas.ExtremaInfo(k_min=summary.k_min, k_max=summary.k_max),
        brute=schemas.BruteInfo(
            k_min=brute.k_min,
            k_max=brute.k_max,
            argmin=brute.argmin.to_json(),
            argmax=brute.argmax.to_json(),
        ),
        max_abs_diff=diff,
        tensor=schemas.TensorDoc(
            frame_label=doc["frame_label"], components=doc["components"]
        ),
    )


def run_certify(req: schemas.CertifyRequest) -> schemas.CertifyResponse:
    report = variational.certify_regime(
        req.chi, req.lam, req.samples, req.seed, bounds=req.bounds
    )
    rows = [
        schemas.ViolationRow(
            check=v.check,
            margin=v.margin,
            a=v.profile.a,
            b=v.profile.b,
            bmod=v.profile.bmod,
            d1_xi2=[complex(v.fd.d1_xi2).real, complex(v.fd.d1_xi2).imag],
            d2_xi2=[complex(v.fd.d2_xi2).real, complex(v.fd.d2_xi2).imag],
            d1bar_xi2=[complex(v.fd.d1bar_xi2).real, complex(v.fd.d1bar_xi2).imag],
            d2bar_xi2=[complex(v.fd.d2bar_xi2).real, complex(v.fd.d2bar_xi2).imag],
            d1_r1212=[complex(v.fd.d1_r1212).real, complex(v.fd.d1_r1212).imag],
        )
        for v in report.violations
    ]
    return schemas.CertifyResponse(
        chi=report.chi,
        lam=report.lam,
        samples=report.samples,
        seed=report.seed,
        min_margin=report.min_margin,
        product_range=report.product_range,
        violation_count=len(rows),
        violations=rows,
    )


def run_lemma_test(req: schemas.LemmaTestRequest) -> schemas.LemmaTestResponse:
    rng = np.random.default_rng(req.seed)
    failures = []
    worst_three = 0.0
    worst_grad = 0.0
    worst_prof = 0.0
    for i in range(req.samples):
        profile = sampling.random_min_profile(rng)
        phase = sampling.random_phase(rng)
        scramble = sampling.haar_unitary(rng)
        hidden = tensor.frame_change(tensor.build_tensor(profile, phase), scramble)
        recovered, change = sectional.recover_profile(hidden)
        aligned = tensor.frame_change(hidden, change)
        three = tensor.three_index_residual(aligned)
        grad = sectional.critical_gradient(aligned, sectional.Direction(1.0, 0.0))
        prof_err = max(
            abs(recovered.a - profile.a),
            abs(recovered.b - profile.b),
            abs(recovered.bmod - profile.bmod),
        )
        worst_three = max(worst_three, three)
        worst_grad = max(worst_grad, grad)
        worst_prof = max(worst_prof, prof_err)
        if (
            three > LEMMA_THREE_INDEX_TOL
            or grad > LEMMA_GRADIENT_TOL
            or prof_err > LEMMA_PROFILE_TOL
        ):
            failures.append(
                schemas.LemmaFailure(
                    index=i,
                    three_index_residual=three,
                    gradient=grad,
                    profile_error=prof_err,
                )
            )
    return schemas.LemmaTestResponse(
        samples=req.samples,
        seed=req.seed,
        max_three_index_residual=worst_three,
        max_gradient=worst_grad,
        max_profile_error=worst_prof,
        failures=failures,
    )
