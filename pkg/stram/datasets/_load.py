#!/usr/bin/env python3 -u
# copyright: stram developers, BSD-3-Clause License (see LICENSE file)
"""Loaders for the instances bundled with ``stram``."""
from pathlib import Path
from typing import List

from stram.model import Instance, load_instance

__author__: List[str] = ["stram-developers"]
__all__: List[str] = ["desk_instance_path", "load_desk_instance"]

DATA_DIR = Path(__file__).parent / "data"


def desk_instance_path() -> Path:
    """Return the directory of the bundled desk-scale instance.

    Returns
    -------
    Path
        Directory holding ``instance.json``, ``scenarios.json`` and the CSV files.

    Examples
    --------
    >>> from stram.datasets import desk_instance_path
    >>> (desk_instance_path() / "instance.json").exists()
    True
    """
    return DATA_DIR / "desk"


def load_desk_instance() -> Instance:
    """Load the bundled desk-scale instance.

    The instance has three Norwegian cities connected by road, rail and sea, two
    product groups and three periods (2023, 2026 and 2030). Battery trucks and
    biogas vessels are new technologies whose fuel groups vary across scenarios.

    Returns
    -------
    Instance
        The parsed instance.

    See Also
    --------
    stram.scenarios.load_scenario_tree :
        Read the matching ``scenarios.json``.

    Examples
    --------
    >>> from stram.datasets import load_desk_instance
    >>> instance = load_desk_instance()
    >>> instance.modes
    ('rail', 'road', 'sea')
    >>> instance.time.period_years
    (2023, 2026, 2030)
    """
    return load_instance(desk_instance_path())
