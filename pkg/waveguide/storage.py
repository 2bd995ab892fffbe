import json
import logging
import os
import tempfile

import pandas as pd

from config.settings import Config
from waveguide.model import SystemSpec
from waveguide.sweep import SweepSpec

logger = logging.getLogger(__name__)

CSV_FLOAT_FORMAT = "%.17g"


class Storage:
    """Reads configs and writes results; every write is temp file + rename."""

    def __init__(self, output_dir: str = Config.OUTPUT_DIR):
        self.output_dir = output_dir

    def resolve(self, path: str) -> str:
        """Relative bare file names land in the output directory."""
        if os.path.isabs(path) or os.path.dirname(path):
            return path
        return os.path.join(self.output_dir, path)

    def _write_atomic(self, path: str, text: str) -> str:
        path = self.resolve(path)
        directory = os.path.dirname(os.path.abspath(path))
        os.makedirs(directory, exist_ok=True)
        fd, tmp_path = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
        try:
            with os.fdopen(fd, "w", newline="") as handle:
                handle.write(text)
            os.replace(tmp_path, path)
        except OSError as e:
            logger.error(f"Failed writing {path}: {e}")
            if os.path.exists(tmp_path):
                os.remove(tmp_path)
            raise
        logger.info(f"Wrote {path}")
        return path

    def save_sweep(self, frame: pd.DataFrame, path: str) -> str:
        """CSV with a header row, 17 significant digits and LF line endings."""
        text = frame.to_csv(index=False, float_format=CSV_FLOAT_FORMAT, lineterminator="\n")
        return self._write_atomic(path, text)

    def save_json(self, data: dict, path: str) -> str:
        return self._write_atomic(path, json.dumps(data, indent=2) + "\n")

    def load_json(self, path: str) -> dict:
        with open(path) as handle:
            return json.load(handle)

    def load_system(self, path: str) -> SystemSpec:
        return SystemSpec.from_dict(self.load_json(path))

    def load_sweep(self, path: str) -> SweepSpec:
        return SweepSpec.from_dict(self.load_json(path))
