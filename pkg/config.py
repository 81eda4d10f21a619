import os
import yaml
import logging
from dataclasses import dataclass, replace
from typing import Dict, Any, List, Optional, Tuple

from curve import MAX_DEPTH
from errors import ValidationError


@dataclass(frozen=True)
class PipelineConfig:
    """Parameters of one pipeline run; embedded verbatim in every report"""
    depth: int = 4
    degrees: Tuple[int, ...] = (8, 16, 32)
    delta: float = 0.05
    delta_decay: float = 1.0
    seed: int = 0
    vector: Optional[str] = None
    solver: str = 'schur'
    input_path: Optional[str] = None
    output_dir: str = 'reports'
    max_depth: int = MAX_DEPTH

    def validate(self) -> 'PipelineConfig':
        """
        Checks the parameter ranges
        Returns:
            PipelineConfig: self, for chaining
        """
        if not 1 <= self.depth <= self.max_depth:
            raise ValidationError(f"depth {self.depth} outside [1, {self.max_depth}]", stage='config',
                                  hint=f'pass --depth between 1 and {self.max_depth}')
        if not self.degrees:
            raise ValidationError("no polynomial degrees given", stage='config', hint='pass --degrees 8,16,32')
        if any(d < 0 for d in self.degrees):
            raise ValidationError(f"negative degree in {list(self.degrees)}", stage='config')
        if any(b <= a for a, b in zip(self.degrees, self.degrees[1:])):
            raise ValidationError(f"degrees must be strictly ascending: {list(self.degrees)}", stage='config')
        if not self.delta > 0:
            raise ValidationError(f"delta must be positive, got {self.delta}", stage='config')
        if not 0 < self.delta_decay <= 1:
            raise ValidationError(f"delta_decay must lie in (0, 1], got {self.delta_decay}", stage='config')
        return self

    def to_dict(self) -> Dict[str, Any]:
        return {
            'depth': self.depth,
            'degrees': list(self.degrees),
            'delta': self.delta,
            'delta_decay': self.delta_decay,
            'seed': self.seed,
            'vector': self.vector,
            'solver': self.solver,
            'input': self.input_path,
        }


class Config:
    """YAML configuration of the pipeline"""

    def __init__(self, config_path: str = 'config.yaml'):
        """
        Loads the configuration
        Args:
            config_path: path to the YAML file
        """
        self.config_path = os.path.expanduser(config_path)
        self.config = self._load_config()

    def _load_config(self) -> Dict[str, Any]:
        """
        Reads the configuration file
        Returns:
            Dict: configuration dictionary
        """
        try:
            with open(self.config_path, 'r') as f:
                config = yaml.safe_load(f) or {}
                logging.info(f"Using configuration file: {self.config_path}")
                return config
        except FileNotFoundError:
            logging.error(f"Configuration file not found: {self.config_path}")
            raise
        except yaml.YAMLError as e:
            logging.error(f"Cannot parse configuration file: {e}")
            raise ValidationError(f"malformed configuration file {self.config_path}: {e}", stage='config')

    @property
    def pipeline(self) -> Dict[str, Any]:
        return self.config.get('pipeline', {}) or {}

    @property
    def depth(self) -> int:
        return int(self.pipeline.get('depth', 4))

    @property
    def degrees(self) -> List[int]:
        return [int(d) for d in self.pipeline.get('degrees', [8, 16, 32])]

    @property
    def delta(self) -> float:
        return float(self.pipeline.get('delta', 0.05))

    @property
    def delta_decay(self) -> float:
        return float(self.pipeline.get('delta_decay', 1.0))

    @property
    def seed(self) -> int:
        return int(self.pipeline.get('seed', 0))

    @property
    def vector(self) -> Optional[str]:
        return self.pipeline.get('vector')

    @property
    def solver(self) -> str:
        return self.config.get('solver', {}).get('name', 'schur')

    @property
    def max_depth(self) -> int:
        return int(self.config.get('limits', {}).get('max_depth', MAX_DEPTH))

    @property
    def output_dir(self) -> str:
        return os.path.expanduser(self.config.get('paths', {}).get('output_dir', 'reports'))

    @property
    def log_file_path(self) -> str:
        """Path of the log file"""
        return os.path.expanduser(self.config.get('paths', {}).get('log_file', 'peano_berg.log'))

    def pipeline_config(self, **overrides) -> PipelineConfig:
        """
        Builds a validated PipelineConfig; None overrides keep the YAML value
        Args:
            overrides: PipelineConfig fields coming from the command line
        Returns:
            PipelineConfig: validated parameters
        """
        base = PipelineConfig(
            depth=self.depth,
            degrees=tuple(self.degrees),
            delta=self.delta,
            delta_decay=self.delta_decay,
            seed=self.seed,
            vector=self.vector,
            solver=self.solver,
            output_dir=self.output_dir,
            max_depth=self.max_depth,
        )
        given = {key: value for key, value in overrides.items() if value is not None}
        if 'degrees' in given:
            given['degrees'] = tuple(given['degrees'])
        if given:
            logging.debug(f"Command-line overrides: {given}")
        return replace(base, **given).validate()
