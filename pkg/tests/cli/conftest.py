import pytest

import trendsetter.cli.app
from tests.helpers import SYNTH_DEMO, SYNTH_DEMO_PIPELINE


def _quiet_logging(path=None):
    pass


@pytest.fixture(autouse=True)
def no_logging_config(monkeypatch):
    monkeypatch.setattr(trendsetter.cli.app, 'get_logging_config', _quiet_logging)


@pytest.fixture(scope='module')
def demo_run(tmp_path_factory):
    """Synthetic demo data and its unit influence tensor, built once through the command line."""
    root = tmp_path_factory.mktemp('demo')
    pipeline = ['--config', str(SYNTH_DEMO_PIPELINE)]
    with pytest.MonkeyPatch.context() as patch:
        patch.setattr(trendsetter.cli.app, 'get_logging_config', _quiet_logging)
        assert trendsetter.cli.app.main(pipeline + ['synth', '--synth-config', str(SYNTH_DEMO), '--output',
                                                    str(root / 'data')]) == 0
        assert trendsetter.cli.app.main(pipeline + ['granger', '--trajectories', str(root / 'data'),
                                                    '--output', str(root / 'unit_tensor.json')]) == 0
    return root
