"""Shared fixtures: kernel-backend isolation for tests that switch backends."""

from __future__ import annotations

import pytest

from oride_attack import kernels


@pytest.fixture
def restore_backend():
    """Snapshot the selected kernel backend and restore it afterwards."""
    before = kernels.BACKEND
    yield
    kernels.use_backend(before)
