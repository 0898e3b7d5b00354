import re
from pathlib import Path

from cfdyn.natext import A, Z
from cfdyn.regions import Region, disk
from cfdyn.arith import RationalComplex
from cfdyn.render import SvgScene, compose, region_geometry, render_figure
from cfdyn.render import partition_scene

SNAPSHOTS = Path(__file__).parent / "snapshots"


def cells(svg: str) -> set[str]:
    return set(re.findall(r'class="cell" data-cell="([^"]*)"', svg))


def test_partition_has_forty_cells():
    svg = render_figure("partition")
    found = cells(svg)
    assert len(found) == 40
    assert len(re.findall(r'class="cell"', svg)) == 40
    assert {name.split(" W")[1] for name in found} == {"1", "2", "3", "4", "5"}


def test_partition_count_in_smaller_window():
    assert len(cells(partition_scene((-3, 3, -3, 3)).to_svg())) == 40


def test_render_is_deterministic():
    for name in ("partition", "psi"):
        assert render_figure(name) == render_figure(name)


def test_z1hat_snapshot():
    assert render_figure("z1hat") == (SNAPSHOTS / "z1hat.svg").read_text(encoding="utf-8")


def test_psi_has_five_product_panels():
    svg = render_figure("psi")
    for k in range(1, 6):
        assert f">A{k} (light), Z{k} (dark)<" in svg and f">W{k}<" in svg


def test_light_part_covers_dark_part():
    for k in range(1, 6):
        light, dark = region_geometry(A[k]), region_geometry(Z[k])
        assert dark.difference(light).area < 1e-6


def test_region_outside_viewport_is_skipped():
    s = SvgScene((-1, 1, -1, 1))
    far = Region.of(disk(RationalComplex(10, 10), 1))
    assert not s.add_region(far, "#000")
    assert s.add_region(Region.of(disk(RationalComplex(0, 0), 1)), "#000")


def test_coordinates_use_six_decimals():
    s = SvgScene((-1, 1, -1, 1))
    s.add_point(0.1 + 0.2j)
    s.add_label(-0.0 + 0j, "o")
    text = compose([s], cols=1)
    numbers = re.findall(r'="(-?\d+\.\d+)"', text.split("?>", 1)[1])
    assert numbers and all(len(n.split(".")[1]) == 6 for n in numbers)
    assert '"-0.000000"' not in text
    # y axis points up
    assert 'cy="-0.200000"' in text
