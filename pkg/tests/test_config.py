import pytest

from config import Config, PipelineConfig
from errors import ValidationError


def test_properties_come_from_yaml(config, tmp_path):
    assert config.depth == 4
    assert config.degrees == [8, 16, 32]
    assert config.delta == pytest.approx(0.05)
    assert config.seed == 7
    assert config.solver == 'schur'
    assert config.output_dir == str(tmp_path / 'reports')
    assert config.log_file_path.endswith('peano_berg.log')


def test_defaults_for_missing_sections(tmp_path):
    path = tmp_path / 'empty.yaml'
    path.write_text('')
    config = Config(str(path))
    assert config.depth == 4
    assert config.delta_decay == 1.0
    assert config.max_depth == 6
    assert config.vector is None


def test_missing_file_is_reraised(tmp_path):
    with pytest.raises(FileNotFoundError):
        Config(str(tmp_path / 'absent.yaml'))


def test_malformed_yaml(tmp_path):
    path = tmp_path / 'broken.yaml'
    path.write_text('pipeline: [depth: 4\n')
    with pytest.raises(ValidationError):
        Config(str(path))


def test_overrides_replace_yaml_values(config):
    settings = config.pipeline_config(depth=3, degrees=[2, 4], seed=None)
    assert settings.depth == 3
    assert settings.degrees == (2, 4)
    assert settings.seed == 7


@pytest.mark.parametrize('overrides', [
    {'depth': 0},
    {'depth': 7},
    {'degrees': [8, 8]},
    {'degrees': [-1, 4]},
    {'degrees': []},
    {'delta': 0.0},
    {'delta_decay': 1.5},
])
def test_invalid_settings(config, overrides):
    with pytest.raises(ValidationError):
        config.pipeline_config(**overrides)


def test_settings_dict_is_json_ready():
    data = PipelineConfig(seed=3, input_path='a.json').to_dict()
    assert data['seed'] == 3
    assert data['degrees'] == [8, 16, 32]
    assert data['input'] == 'a.json'
