#!/usr/bin/env python3 -u
# copyright: stram developers, BSD-3-Clause License (see LICENSE file)
"""Test the bundled instances."""
import pytest

from stram.datasets import desk_instance_path, load_desk_instance
from stram.model import validate_instance
from stram.scenarios import load_scenario_tree

__author__ = ["stram-developers"]


def test_desk_instance_validates():
    """Test the desk instance loads without validation errors."""
    report = validate_instance(load_desk_instance())
    assert report.ok, report.errors


def test_desk_scenarios_match_instance():
    """Test the bundled scenario tree is a probability distribution."""
    tree = load_scenario_tree(desk_instance_path())
    assert sum(tree.probabilities.values()) == pytest.approx(1.0)
    assert sum(spec.is_base for spec in tree.scenarios) == 1
    assert len(set(tree.ids)) == len(tree.ids)
