import io
import json

import numpy as np
import pandas as pd
import pytest

import realstab
from realstab.jsonio import load_json, matrix_from_json, realization_from_json, realization_to_json, dumps
from realstab.realization import state_feedback_realization, state_feedback_iop_transform, transform
from realstab.sim import read_trace


def error_payload(err: str):
    return json.loads(err.strip().splitlines()[-1])


def test_version(run):
    code, out, _ = run('version')
    assert code == 0
    assert realstab.__version__ in out


def test_check_stable(run, fixture):
    code, out, _ = run('check', fixture('loop.json'))
    assert code == 0
    report = json.loads(out)
    assert report['stable'] and report['verdict'] == 'stable'
    assert report['noncausal_blocks'] == []
    S = matrix_from_json(report['S'])
    assert S.evaluate(2.)[0, 0] == pytest.approx((2 - 0.5) / (2 - 0.8))


def test_check_unstable(run, fixture):
    code, out, _ = run('check', fixture('unstable_loop.json'))
    assert code == 0
    report = json.loads(out)
    assert not report['stable']
    assert report['verdict'] == 'unstable'
    assert np.allclose(report['witness'], [[1.3, 0.]])


def test_check_writes_file(run, fixture, tmp_path):
    out_path = tmp_path / 'report.json'
    code, out, _ = run('check', fixture('loop.json'), '--out', out_path)
    assert code == 0 and out == ''
    assert load_json(out_path)['stable']


def test_parse_error(run, fixture):
    code, _, err = run('check', fixture('broken.json'))
    assert code == 2
    payload = error_payload(err)
    assert payload['error'] == 'parse'
    assert payload['exit_code'] == 2


def test_missing_file(run, tmp_path):
    code, _, err = run('check', tmp_path / 'nothing.json')
    assert code == 2
    assert error_payload(err)['error'] == 'parse'


def test_synth_integrator_deadbeat(run, fixture):
    code, out, _ = run('synth', fixture('integrator.json'), '--method', 'sls-sf', '--horizon', 1)
    assert code == 0
    result = json.loads(out)
    assert result['closed_loop'] == 'stable'
    assert result['metadata']['horizon'] == 1
    assert result['residuals']['affine'] < 1e-10
    K = matrix_from_json(result['controller'])
    assert np.allclose(K.evaluate(2.), -1.)
    assert np.allclose(K.evaluate(5j), -1.)


@pytest.mark.parametrize('method', ['youla', 'iop'])
def test_synth_central_controller(run, fixture, method):
    code, out, _ = run('synth', fixture('lag_plant.json'), '--method', method)
    assert code == 0
    result = json.loads(out)
    assert result['method'] == method
    assert result['closed_loop'] == 'stable'
    assert result['residuals']['bezout'] < 1e-8
    assert result['residuals']['plant'] < 1e-8


def test_youla_and_iop_agree(run, fixture):
    controllers = []
    for method in ('youla', 'iop'):
        _, out, _ = run('synth', fixture('lag_plant.json'), '--method', method)
        controllers.append(matrix_from_json(json.loads(out)['controller']))
    for z0 in (2., 5j):
        assert np.allclose(controllers[0].evaluate(z0), controllers[1].evaluate(z0), atol=1e-7)


def test_synth_youla_parameter(run, fixture, tmp_path):
    q = tmp_path / 'q.json'
    q.write_text(json.dumps([[{'num': [0.2], 'den': [0., 1.]}]]))
    code, out, _ = run('synth', fixture('lag_plant.json'), '--method', 'youla', '--q', q)
    assert code == 0
    assert json.loads(out)['closed_loop'] == 'stable'


def test_synth_infeasible(run, fixture):
    code, _, err = run('synth', fixture('unreachable.json'), '--horizon', 2)
    assert code == 4
    assert error_payload(err)['error'] == 'infeasible'


@pytest.mark.parametrize('option', [('--horizon', 0), ('--horizon', -3)])
def test_invalid_option(run, fixture, option):
    code, _, err = run('synth', fixture('integrator.json'), *option)
    assert code == 2
    assert 'horizon' in error_payload(err)['message']


def test_synth_is_deterministic(run, fixture):
    outputs = [run('synth', fixture('lag_plant.json'), '--method', 'iop')[1] for _ in range(2)]
    assert outputs[0] == outputs[1]


def test_equiv_identity(run, fixture):
    loop = fixture('loop.json')
    code, out, _ = run('equiv', loop, loop, fixture('identity.json'))
    assert code == 0
    report = json.loads(out)
    assert report['equivalent']
    assert report['stable'] == [True, True]
    assert report['T_stable'] and report['T_inverse_stable']


def test_equiv_state_feedback_transform(run, tmp_path):
    A, B, K = [[0.5, 1.], [0., -0.3]], [[0.], [1.]], [[-0.1, -0.2]]
    r = state_feedback_realization(A, B, K)
    T = state_feedback_iop_transform(np.array(A), 1)
    paths = {}
    for name, payload in (('r1', realization_to_json(r)), ('r2', realization_to_json(transform(r, T))),
                          ('t', T.to_list())):
        paths[name] = tmp_path / f'{name}.json'
        paths[name].write_text(dumps(payload))
    code, out, _ = run('equiv', paths['r1'], paths['r2'], paths['t'])
    assert code == 0
    report = json.loads(out)
    assert report['equivalent']
    assert not report['T_stable']
    code, out, _ = run('equiv', paths['r1'], paths['r1'], paths['t'])
    assert not json.loads(out)['equivalent']


def test_equiv_shape_mismatch(run, fixture, tmp_path):
    other = tmp_path / 'state.json'
    other.write_text(dumps(realization_to_json(state_feedback_realization([[0.5, 0.], [0., 0.5]], [[1.], [1.]],
                                                                          [[0., 0.]]))))
    code, _, err = run('equiv', fixture('loop.json'), other, fixture('identity.json'))
    assert code == 2


def test_robust_perturbation(run, fixture):
    code, out, _ = run('robust', fixture('loop.json'), fixture('gain_change.json'))
    assert code == 0
    report = json.loads(out)
    assert report['stable'] and report['verdict'] == 'stable'
    assert report['residuals']['direct'] < 1e-8


def test_robust_margin(run, fixture):
    code, out, _ = run('robust', fixture('loop.json'), '--margin', 'u,y')
    assert code == 0
    margin = json.loads(out)['margin']
    assert margin['block'] == ['u', 'y']
    assert margin['margin'] == pytest.approx(0.2, rel=1e-6)
    assert margin['norm'] == pytest.approx(5., rel=1e-6)


@pytest.mark.parametrize('epsilon,robust', [(0.19, True), (0.21, False)])
def test_robust_epsilon_flip(run, fixture, epsilon, robust):
    _, out, _ = run('robust', fixture('loop.json'), '--margin', 'u,y', '--epsilon', epsilon)
    assert json.loads(out)['margin']['robust'] is robust


def test_robust_spot_checks(run, fixture):
    _, out, _ = run('--seed', 7, 'robust', fixture('loop.json'), '--margin', 'u,y', '--spot-checks', 5)
    sweep = json.loads(out)['margin']['sweep']
    assert sweep['samples'] == 5
    assert sweep['passed'] == 5
    assert sweep['failures'] == []


@pytest.mark.parametrize('argv', [(), ('--margin', 'u'), ('--margin', 'u,w')])
def test_robust_bad_arguments(run, fixture, argv):
    code, _, err = run('robust', fixture('loop.json'), *argv)
    assert code == 2
    assert error_payload(err)['error'] == 'parse'


def test_robust_needs_stable_nominal(run, fixture):
    code, _, err = run('robust', fixture('unstable_loop.json'), '--margin', 'u,y')
    assert code == 1
    assert error_payload(err)['error'] == 'not-stable'


def test_sim_impulse_on_output(run, fixture):
    code, out, _ = run('sim', fixture('loop.json'), fixture('impulse_y.csv'))
    assert code == 0
    frame = pd.read_csv(io.StringIO(out))
    assert list(frame.columns) == ['y[0]', 'u[0]']
    expected = [1., 0.3, 0.24, 0.192, 0.1536]
    assert np.allclose(frame['y[0]'], expected)
    assert np.allclose(frame['u[0]'], 0.3 * np.array(expected))


def test_sim_zero_disturbance(run, fixture, tmp_path):
    out_path = tmp_path / 'trace.csv'
    code, _, _ = run('sim', fixture('loop.json'), '--steps', 8, '--out', out_path)
    assert code == 0
    trace = read_trace(out_path, realization_from_json(load_json(fixture('loop.json'))).space)
    assert trace.values.shape == (8, 2)
    assert not trace.values.any()


def test_sim_is_deterministic(run, fixture):
    outputs = [run('sim', fixture('loop.json'), fixture('impulse_y.csv'), '--steps', 12)[1] for _ in range(2)]
    assert outputs[0] == outputs[1]
    assert len(outputs[0].strip().splitlines()) == 13


def test_sim_needs_steps(run, fixture):
    code, _, err = run('sim', fixture('loop.json'))
    assert code == 2
    assert 'steps' in error_payload(err)['message']


def test_sim_ill_posed(run, fixture):
    code, _, err = run('sim', fixture('ill_posed.json'), '--steps', 3)
    assert code == 3
    assert error_payload(err)['error'] == 'ill-posed'


def test_impulse_match(run, fixture):
    code, out, _ = run('impulse', fixture('loop.json'), '--horizon', 30)
    assert code == 0
    report = json.loads(out)
    assert report['matched']
    assert report['horizon'] == 30
    assert report['max_deviation'] < 1e-8


def test_impulse_of_unstable_loop(run, fixture):
    code, _, err = run('impulse', fixture('unstable_loop.json'))
    assert code == 1
    assert error_payload(err)['error'] == 'not-stable'


def test_tolerance_flags(run, fixture):
    code, out, _ = run('--pole-tol', 1e-6, '--cancel-tol', 1e-8, 'check', fixture('loop.json'))
    assert code == 0 and json.loads(out)['stable']
    code, _, _ = run('--pole-tol', -1, 'check', fixture('loop.json'))
    assert code == 2


@pytest.mark.parametrize('argv,needle', [
    (('synth', 'plant.json', '--horizon', 'abc'), 'abc'),
    (('frobnicate',), 'frobnicate'),
    (('check',), 'realization'),
    (('synth', 'plant.json', '--method', 'lqr'), 'lqr'),
])
def test_usage_errors_are_json(run, argv, needle):
    code, out, err = run(*argv)
    assert code == 2 and out == ''
    payload = error_payload(err)
    assert payload['error'] == 'parse'
    assert payload['exit_code'] == 2
    assert needle in payload['message']
    assert payload['usage'].startswith('usage: realstab')


def test_missing_subcommand_is_json(run):
    code, _, err = run()
    assert code == 2
    payload = error_payload(err)
    assert payload['error'] == 'parse'
    assert 'sub-command' in payload['message']


def rounded(value, digits=6):
    """Floats rounded to `digits` decimals, with -0.0 written as 0.0"""
    if isinstance(value, float):
        return round(value, digits) + 0.
    if isinstance(value, list):
        return [rounded(v, digits) for v in value]
    if isinstance(value, dict):
        return {k: rounded(v, digits) for k, v in value.items()}
    return value


def canonical_json(text: str) -> str:
    return json.dumps(rounded(json.loads(text)), sort_keys=True, indent=2) + '\n'


def canonical_csv(text: str) -> str:
    return pd.read_csv(io.StringIO(text)).round(9).to_csv(index=False, lineterminator='\n')


@pytest.mark.parametrize('golden,argv', [
    ('check_loop.json', ('check', 'loop.json')),
    ('synth_integrator.json', ('synth', 'integrator.json', '--method', 'sls-sf', '--horizon', 1)),
    ('equiv_identity.json', ('equiv', 'loop.json', 'loop.json', 'identity.json')),
    ('robust_gain_change.json', ('robust', 'loop.json', 'gain_change.json')),
    ('impulse_loop.json', ('impulse', 'loop.json', '--horizon', 30)),
])
def test_json_golden_output(run, fixture, expected, golden, argv):
    command, *rest = argv
    rest = [fixture(a) if str(a).endswith('.json') else a for a in rest]
    code, out, err = run(command, *rest)
    assert code == 0, err
    assert canonical_json(out) == expected(golden)


def test_sim_golden_output(run, fixture, expected):
    code, out, _ = run('sim', fixture('loop.json'), fixture('impulse_y.csv'))
    assert code == 0
    assert canonical_csv(out) == expected('sim_impulse_y.csv')
