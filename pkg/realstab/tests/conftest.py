from pathlib import Path

import pytest

from realstab.command_line import main

FIXTURES = Path(__file__).parent / 'fixtures'


@pytest.fixture
def fixture():
    def path(name):
        return str(FIXTURES / name)
    return path


@pytest.fixture
def run(capsys):
    """main(argv) -> (exit code, stdout, stderr)"""
    def invoke(*argv):
        try:
            main([str(a) for a in argv])
            code = 0
        except SystemExit as e:
            code = e.code
        out, err = capsys.readouterr()
        return code, out, err
    return invoke


@pytest.fixture
def expected():
    """Text of an expected-output file under fixtures/golden"""
    def read(name):
        return (FIXTURES / 'golden' / name).read_text()
    return read
