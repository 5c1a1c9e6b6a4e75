"""Tests for fan validation."""

import pytest

from campana_cli.core.models import Fan
from campana_cli.errors import IncompleteFanError, NonPrimitiveRayError, NonSmoothConeError
from campana_cli.data import list_bundled_fans
from campana_cli.validation.validator import _check_covering, _check_facets, _side, validate_fan


def test_p2_valid(p2):
    report = validate_fan(p2.fan)
    assert report.valid
    assert (report.n, report.s, report.r) == (2, 3, 1)
    assert report.cones_checked == 3


def test_p1_valid(p1):
    report = validate_fan(p1.fan)
    assert report.valid
    assert report.r == 1


@pytest.mark.parametrize("name", ["p1xp1", "bl1p2", "bl2p2"])
def test_bundled_fans_valid(name):
    from campana_cli.core.fanfile import load_instance

    assert validate_fan(load_instance(name).fan).valid


@pytest.mark.parametrize("name", list_bundled_fans())
def test_every_bundled_fan_validates(name):
    from campana_cli.core.fanfile import load_instance

    report = validate_fan(load_instance(name).fan)
    assert report.valid
    assert report.complete


def test_side_is_plain_int(p2):
    sides = {_side(p2.fan, (0,), 1), _side(p2.fan, (0,), 2)}
    assert sides == {1, -1}
    assert all(type(v) is int for v in sides)


def test_non_smooth_cone():
    fan = Fan(dim=2, rays=((1, 0), (1, 2)), max_cones=((0, 1),))
    with pytest.raises(NonSmoothConeError) as exc:
        validate_fan(fan)
    assert exc.value.det in (2, -2)


def test_non_primitive_ray_checked_first():
    fan = Fan(dim=2, rays=((2, 0), (1, 2)), max_cones=((0, 1),))
    with pytest.raises(NonPrimitiveRayError) as exc:
        validate_fan(fan)
    assert exc.value.index == 0


def test_missing_cone_is_incomplete():
    fan = Fan(dim=2, rays=((1, 0), (0, 1), (-1, -1)), max_cones=((0, 1), (1, 2)))
    with pytest.raises(IncompleteFanError):
        validate_fan(fan)


def test_double_cover_is_incomplete():
    # the three P^2 cones and the three cones of its negative cover R^2 twice
    rays = ((1, 0), (0, 1), (-1, -1), (-1, 0), (0, -1), (1, 1))
    cones = ((0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5))
    fan = Fan(dim=2, rays=rays, max_cones=cones)
    report = validate_fan(fan, strict=False)
    assert not report.complete


def test_covering_catches_double_winding():
    # consecutive cones wind twice around the origin; every facet check passes
    rays = ((1, 0), (0, 1), (-1, 0), (0, -1), (1, 1), (-1, 1), (-1, -1), (1, -1))
    cones = tuple((i, (i + 1) % 8) for i in range(8))
    fan = Fan(dim=2, rays=rays, max_cones=cones)
    assert _check_facets(fan) == []
    failures = _check_covering(fan)
    assert len(failures) == 1
    assert isinstance(failures[0], IncompleteFanError)
    assert "2 times" in str(failures[0])


def test_non_strict_collects_errors():
    fan = Fan(dim=2, rays=((1, 0), (1, 2)), max_cones=((0, 1),))
    report = validate_fan(fan, strict=False)
    assert not report.valid
    assert not report.smooth
    assert not report.complete
    assert report.errors


def test_unused_ray_warns():
    fan = Fan(
        dim=2,
        rays=((1, 0), (0, 1), (-1, -1), (1, 1)),
        max_cones=((0, 1), (1, 2), (0, 2)),
    )
    report = validate_fan(fan)
    assert report.valid
    assert any("ray 4" in w for w in report.warnings)
