#!/usr/bin/env python
import json
import logging
import sys
from argparse import ArgumentParser

import realstab
from realstab.context import current_tolerances
from realstab.exceptions import RealstabError, ParseError, NotStableError
from realstab.jsonio import (load_json, plant_arrays, plant_from_json, matrix_from_json, realization_from_json,
                             perturbation_from_json, dumps, to_jsonable)
from realstab.param import (dcf, youla_controller, youla_iop_bridge, controller_from_iop, sls_sf_synthesize,
                            sls_sf_controller)
from realstab.realization import check_internal, equiv_check, state_feedback_realization
from realstab.robust import robust_check, perturbation_residuals, small_gain_margin, small_gain_sweep
from realstab.sim import simulate, impulse_match, read_disturbance, write_trace, compile_realization
from realstab.tfmat import tm_hinf_norm

METHODS = ('sls-sf', 'youla', 'iop')


def emit(args, payload):
    text = dumps(payload)
    if args.out is None:
        print(text)
    else:
        with open(args.out, 'w') as f:
            f.write(text + '\n')


def _stability_payload(report):
    return {'verdict': report.verdict, 'stable': report.internally_stable, 'causal': report.causal_ok,
            'noncausal_blocks': report.noncausal_blocks, 'unstable_entries': report.unstable_entries,
            'witness': report.witness, 'residual': report.residual, 'error': report.error, 'S': report.S}


def _robust_payload(report):
    return {'verdict': report.verdict, 'stable': report.stable, 'well_posed': report.well_posed,
            'witness': report.witness, 'unstable_entries': report.unstable_entries, 'error': report.error}


def _youla_parameter(args):
    return None if args.q is None else matrix_from_json(load_json(args.q), 'Q')


def synth(args):
    d = load_json(args.plant)
    if args.method == 'sls-sf':
        arrays = plant_arrays(d)
        A, B = arrays['A'], arrays['B']
        phi = sls_sf_synthesize(A, B, args.horizon)
        K = sls_sf_controller(phi)
        loop = check_internal(state_feedback_realization(A, B, K))
        payload = {'parameterization': {'phi_x': phi.phi_x, 'phi_u': phi.phi_u},
                   'residuals': {'affine': phi.affine_residual()}, 'metadata': phi.metadata}
    else:
        plant = plant_from_json(d)
        cf = dcf(plant)
        Q = _youla_parameter(args)
        residuals = {'bezout': cf.bezout_residual(), 'plant': cf.plant_residual()}
        if args.method == 'youla':
            K = youla_controller(cf, Q)
            payload = {'parameterization': {'Q': Q if Q is not None else 0., **cf.factors}}
        else:
            quad = youla_iop_bridge(cf, Q)
            K = controller_from_iop(quad)
            left, right = quad.identity_residuals()
            residuals.update(iop_left=left, iop_right=right)
            payload = {'parameterization': {'Y': quad.Y, 'U': quad.U, 'W': quad.W, 'Z': quad.Z}}
        payload['residuals'] = residuals
        loop = check_internal(plant.output_feedback(K))
    payload.update(method=args.method, controller=K, closed_loop=loop.verdict)
    emit(args, payload)


def check(args):
    report = check_internal(realization_from_json(load_json(args.realization)))
    emit(args, _stability_payload(report))


def equiv(args):
    r1 = realization_from_json(load_json(args.first))
    r2 = realization_from_json(load_json(args.second))
    T = matrix_from_json(load_json(args.transform), 'T')
    report = equiv_check(r1, r2, T, tol=args.tol, verdicts=True)
    emit(args, report)


def _block(text: str):
    parts = [p.strip() for p in text.split(',')]
    if len(parts) != 2 or not all(parts):
        raise ParseError(f"--margin expects ROW,COL signal names, got {text!r}")
    return tuple(parts)


def robust(args):
    if args.delta is None and args.margin is None:
        raise ParseError("robust needs a perturbation file or --margin ROW,COL")
    nominal = realization_from_json(load_json(args.nominal))
    block = _block(args.margin) if args.margin is not None else None
    nominal_report = check_internal(nominal)
    if not nominal_report.internally_stable:
        raise NotStableError(f"nominal realization is {nominal_report.verdict}", verdict=nominal_report.verdict)
    S_hat = nominal_report.S
    payload = {}
    if args.delta is not None:
        delta = perturbation_from_json(load_json(args.delta), nominal.space)
        report = robust_check(S_hat, delta)
        payload.update(_robust_payload(report))
        if report.well_posed:
            payload['residuals'] = perturbation_residuals(S_hat, delta, R_hat=nominal)
    if block is not None:
        a, b = (nominal.space.check(name) for name in block)
        idx = nominal.space.indices
        M = S_hat.take(idx(b), idx(a))
        margin = small_gain_margin(M, args.grid_size)
        payload['margin'] = {'block': [a, b], 'margin': margin, 'norm': tm_hinf_norm(M, args.grid_size)}
        if args.epsilon is not None:
            payload['margin'].update(epsilon=args.epsilon, robust=bool(args.epsilon < margin))
        if args.spot_checks:
            payload['margin']['sweep'] = small_gain_sweep(S_hat, nominal.space, (a, b), margin,
                                                          samples=args.spot_checks, seed=args.seed)
    emit(args, payload)


def sim(args):
    r = realization_from_json(load_json(args.realization))
    program = compile_realization(r)
    if args.disturbance is None:
        d = None
    else:
        d = read_disturbance(args.disturbance, r.space, args.steps)
    trace = simulate(program, d, args.steps)
    if args.out is None:
        sys.stdout.write(trace.to_frame().to_csv(index=False, float_format='%.17g'))
    else:
        write_trace(trace, args.out)
    logging.info(f"trace digest {trace.digest()}")


def impulse(args):
    r = realization_from_json(load_json(args.realization))
    emit(args, impulse_match(r, args.horizon, args.tol))


def version(args):
    print(f"realstab version: {realstab.__version__}")


def _validate(args):
    for name, least in (('horizon', 1), ('steps', 1), ('grid_size', 2), ('spot_checks', 0)):
        value = getattr(args, name, None)
        if value is not None and value < least:
            raise ParseError(f"--{name.replace('_', '-')} must be at least {least}, got {value}")
    for name in ('tol', 'epsilon', 'pole_tol', 'cancel_tol'):
        value = getattr(args, name, None)
        if value is not None and not value > 0:
            raise ParseError(f"--{name.replace('_', '-')} must be positive, got {value}")


class JsonErrorParser(ArgumentParser):
    """Usage errors are raised as ParseError and reported like every other error"""

    def error(self, message):
        raise ParseError(message, usage=self.format_usage().strip())


def _fail(e: RealstabError):
    sys.stderr.write(json.dumps(to_jsonable(e.to_json()), sort_keys=True) + '\n')
    sys.exit(e.exit_code)


def main(argv=None):
    parser = JsonErrorParser(prog='realstab', description='realization-based stability analysis and synthesis')
    parser.add_argument('--verbose', action='store_true', help='log progress to stderr')
    parser.add_argument('--pole-tol', type=float, default=None, help='margin inside the unit circle for stable poles')
    parser.add_argument('--cancel-tol', type=float, default=None, help='distance below which pole/zero pairs cancel')
    parser.add_argument('--seed', type=int, default=42, help='seed for randomized checks')
    parser.add_argument('--grid-size', type=int, default=512, help='frequency grid for H-infinity norms')
    sub_parsers = parser.add_subparsers(help='sub-command help')

    def add_parser(name, func, help):
        p = sub_parsers.add_parser(name, help=help)
        p.add_argument('--out', default=None, help='output file (default stdout)')
        p.set_defaults(func=func)
        return p

    parser_synth = add_parser('synth', synth, 'synthesize a stabilizing controller for a plant')
    parser_synth.add_argument('plant', help='plant JSON with A, B (and C, D for youla/iop)')
    parser_synth.add_argument('--method', choices=METHODS, default='sls-sf', help='parameterization to synthesize with')
    parser_synth.add_argument('--horizon', type=int, default=20, help='FIR horizon for sls-sf')
    parser_synth.add_argument('--q', default=None, help='Youla parameter JSON (default 0)')
    parser_check = add_parser('check', check, 'internal stability of a realization')
    parser_check.add_argument('realization', help='realization JSON')
    parser_equiv = add_parser('equiv', equiv, 'check that two realizations are related by a transformation')
    parser_equiv.add_argument('first', help='realization JSON')
    parser_equiv.add_argument('second', help='realization JSON')
    parser_equiv.add_argument('transform', help='transformation matrix JSON')
    parser_equiv.add_argument('--tol', type=float, default=1e-7, help='residual tolerance')
    parser_robust = add_parser('robust', robust, 'stability under an additive perturbation or small-gain margin')
    parser_robust.add_argument('nominal', help='nominal realization JSON')
    parser_robust.add_argument('delta', nargs='?', default=None, help='perturbation JSON')
    parser_robust.add_argument('--margin', default=None, metavar='ROW,COL', help='small-gain margin of a block of R')
    parser_robust.add_argument('--epsilon', type=float, default=None, help='perturbation size to test against the margin')
    parser_robust.add_argument('--spot-checks', type=int, default=0,
                               help='seeded constant perturbations inside the margin to test')
    parser_sim = add_parser('sim', sim, 'simulate a realization')
    parser_sim.add_argument('realization', help='realization JSON')
    parser_sim.add_argument('disturbance', nargs='?', default=None, help='disturbance CSV (default zero)')
    parser_sim.add_argument('--steps', type=int, default=None, help='number of steps (default: length of the CSV)')
    parser_impulse = add_parser('impulse', impulse, 'compare simulated impulse responses with the stability matrix')
    parser_impulse.add_argument('realization', help='realization JSON')
    parser_impulse.add_argument('--horizon', type=int, default=20, help='number of impulse coefficients')
    parser_impulse.add_argument('--tol', type=float, default=1e-8, help='largest allowed deviation')
    parser_version = sub_parsers.add_parser('version', help='display realstab version')
    parser_version.set_defaults(func=version)

    try:
        args = parser.parse_args(argv)
    except ParseError as e:
        _fail(e)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=sys.stderr,
                        format='%(levelname)s %(message)s')
    if 'func' not in args:
        _fail(ParseError('a sub-command is required', usage=parser.format_usage().strip()))
    try:
        _validate(args)
        if args.func is sim and args.disturbance is None and args.steps is None:
            raise ParseError("sim needs --steps when no disturbance file is given")
        tolerances = current_tolerances().updated(pole_tol=args.pole_tol, cancel_tol=args.cancel_tol)
        with tolerances:
            args.func(args)
    except RealstabError as e:
        _fail(e)


if __name__ == '__main__':
    main()
