#!/usr/bin/env python3 -u
# copyright: stram developers, BSD-3-Clause License (see LICENSE file)
"""Test loading instance directories."""
import shutil

import pytest

from stram.datasets import desk_instance_path, load_desk_instance
from stram.model import InstanceError, load_instance, validate_instance

__author__ = ["stram-developers"]


@pytest.fixture
def desk_copy(tmp_path):
    """Copy of the desk instance that tests may modify."""
    target = tmp_path / "desk"
    shutil.copytree(desk_instance_path(), target)
    return target


def test_desk_instance_loads_and_validates():
    """Test the bundled instance is complete and valid."""
    instance = load_desk_instance()
    report = validate_instance(instance)
    assert report.ok, report.errors
    assert len(instance.nodes) == 3
    assert instance.products == ("bulk", "general")
    assert len(instance.arcs) == 12
    # rail, road and sea edges between the three cities
    assert len(instance.edges) == 6
    assert instance.time.discount == pytest.approx(1 / 1.04)


def test_carbon_price_is_interpolated_and_extrapolated():
    """Test blank carbon prices are filled linearly for every horizon year."""
    prices = load_desk_instance().costs.carbon_price
    assert sorted(prices) == list(range(2023, 2035))
    slope = (2000.0 - 766.0) / 7
    assert prices[2026] == pytest.approx(766.0 + 3 * slope)
    assert prices[2034] == pytest.approx(2000.0 + 4 * slope)


def test_transfer_costs_are_mirrored():
    """Test a missing reverse transfer direction takes the given direction's cost."""
    costs = load_desk_instance().costs
    assert costs.transfer("rail", "road", "bulk") == costs.transfer(
        "road", "rail", "bulk"
    )
    assert costs.transfer("sea", "sea", "bulk") == 0.0


def test_charging_and_terminal_data_are_attached():
    """Test investment rows end up on the edges and nodes they name."""
    instance = load_desk_instance()
    road_edge = instance.edges[("bergen", "oslo", "road", 1)]
    assert [option.fuel for option in road_edge.charging] == ["Battery"]
    assert instance.nodes["bergen"].terminal_classes == {
        "rail": ("rail_terminal",),
        "sea": ("port",),
    }


def test_megatonne_inputs_are_scaled(desk_copy):
    """Test demand and capacities given in megatonnes are converted to tonnes."""
    manifest = (desk_copy / "instance.json").read_text(encoding="utf-8")
    manifest = manifest.replace('"tonnes"', '"megatonnes"')
    (desk_copy / "instance.json").write_text(manifest, encoding="utf-8")
    instance = load_instance(desk_copy)
    assert instance.demand.get("oslo", "bergen", "bulk", 2023) == pytest.approx(30e6)
    edge = instance.edges[("bergen", "oslo", "rail", 1)]
    assert edge.base_capacity == pytest.approx(80e6)


def test_missing_file_is_named(desk_copy):
    """Test a missing required file raises an error naming it."""
    (desk_copy / "demand.csv").unlink()
    with pytest.raises(InstanceError, match="demand.csv") as info:
        load_instance(desk_copy)
    assert info.value.file == "demand.csv"


def test_malformed_row_reports_row_number(desk_copy):
    """Test an unparsable field raises an error carrying the data row."""
    path = desk_copy / "demand.csv"
    lines = path.read_text(encoding="utf-8").splitlines()
    lines[3] = "oslo,bergen,general,2023,lots"
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    with pytest.raises(InstanceError, match="row 3") as info:
        load_instance(desk_copy)
    assert info.value.row == 3


def test_duplicate_rows_are_rejected(desk_copy):
    """Test duplicated keys are reported with their row."""
    path = desk_copy / "nodes.csv"
    path.write_text(path.read_text(encoding="utf-8") + "oslo,Oslo again\n")
    with pytest.raises(InstanceError, match="Duplicate"):
        load_instance(desk_copy)
