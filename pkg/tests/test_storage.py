import json
import os

import pandas as pd
import pytest

from waveguide.model import TwoAtomParams, two_atom_to_system
from waveguide.storage import Storage
from waveguide.sweep import Axis, Engine, SweepSpec


@pytest.fixture
def storage(tmp_path):
    return Storage(output_dir=str(tmp_path / "results"))


def test_bare_names_land_in_output_dir(storage, tmp_path):
    assert storage.resolve("fig4c.csv") == os.path.join(str(tmp_path / "results"), "fig4c.csv")
    assert storage.resolve(str(tmp_path / "elsewhere.csv")) == str(tmp_path / "elsewhere.csv")


def test_save_sweep_writes_full_precision_csv(storage):
    frame = pd.DataFrame({"delta": [0.0, 1.0 / 3.0], "T": [1.0, 0.1], "status": ["ok", "ok"]})
    path = storage.save_sweep(frame, "small.csv")
    with open(path, "rb") as handle:
        raw = handle.read()
    assert b"\r\n" not in raw
    lines = raw.decode().splitlines()
    assert lines[0] == "delta,T,status"
    assert float(lines[2].split(",")[0]) == 1.0 / 3.0
    assert pd.read_csv(path)["delta"].tolist() == [0.0, 1.0 / 3.0]


def test_writes_leave_no_temporary_files(storage):
    storage.save_json({"a": 1}, "record.json")
    assert os.listdir(storage.output_dir) == ["record.json"]


def test_json_round_trip(storage):
    path = storage.save_json({"energy": 0.5, "values": [1, 2]}, "record.json")
    assert storage.load_json(path) == {"energy": 0.5, "values": [1, 2]}


def test_load_system_and_sweep(storage, tmp_path):
    system = two_atom_to_system(TwoAtomParams(theta=1.0, phi=2.0, j=0.3))
    system_path = tmp_path / "system.json"
    system_path.write_text(system.to_json())
    assert storage.load_system(str(system_path)) == system

    sweep = SweepSpec(engine=Engine.CLOSED_FORM, base=TwoAtomParams(theta=1.0, phi=2.0),
                      axes=(Axis("detuning", -1.0, 1.0, 3),))
    sweep_path = tmp_path / "sweep.json"
    sweep_path.write_text(json.dumps(sweep.to_dict()))
    assert storage.load_sweep(str(sweep_path)) == sweep


def test_missing_file_raises_os_error(storage, tmp_path):
    with pytest.raises(OSError):
        storage.load_json(str(tmp_path / "missing.json"))
