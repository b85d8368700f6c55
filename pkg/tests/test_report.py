import xml.etree.ElementTree as ET

import pytest

from qutil.architecture import CouplingMap, ArchitectureSpec, falcon_r4
from qutil.errors import ConfigurationError, RenderError
from qutil.report import (
    CSV_HEADER,
    RAMP,
    HeatmapSpec,
    heatmap_svg,
    parse_csv,
    parse_filter,
    ramp_color,
    read_csv,
    export_csv,
    render_heatmap,
    table_to_csv,
)
from qutil.sweep import GroupKey, GroupStats, UtilizationTable

SVG = "{http://www.w3.org/2000/svg}"


def make_table(counts=None, total=4, extra=False):
    counts = counts if counts is not None else [i % 5 for i in range(27)]
    groups = {GroupKey("falcon-r4", 6, 20, (1, 1), 2, "sabre"): GroupStats(tuple(counts), total)}
    if extra:
        groups[GroupKey("falcon-r4", 6, 20, (1, 1), 1, "sabre")] = GroupStats(tuple([0] * 27), total)
    return UtilizationTable(groups)


def test_csv_layout():
    text = table_to_csv(make_table())
    lines = text.splitlines()
    assert tuple(lines[0].split(",")) == CSV_HEADER
    assert len(lines) == 28
    assert lines[3] == "falcon-r4,6,20,1:1,2,sabre,2,2,4,0.500000"
    assert text == table_to_csv(make_table())


def test_csv_roundtrip(tmp_path):
    t = make_table(extra=True)
    p = export_csv(t, tmp_path / "u.csv")
    back = read_csv(p)
    assert back == t
    assert table_to_csv(parse_csv(p.read_text())) == p.read_text()
    with pytest.raises(ConfigurationError):
        export_csv(UtilizationTable({}), tmp_path / "e.csv")


def test_ramp():
    assert ramp_color(0) == RAMP[0] and ramp_color(1) == RAMP[-1]
    assert ramp_color(-3) == RAMP[0] and ramp_color(7) == RAMP[-1]
    assert ramp_color(0.5) == RAMP[2]
    # darker as utilization grows: summed RGB strictly decreases
    lum = [sum(int(ramp_color(v / 20)[i:i + 2], 16) for i in (1, 3, 5)) for v in range(21)]
    assert all(a > b for a, b in zip(lum, lum[1:]))


def circles(svg):
    root = ET.fromstring(svg)
    return root.findall(f".//{SVG}circle")


def test_svg_structure():
    f = falcon_r4()
    vals = [q / 26 for q in range(27)]
    svg = heatmap_svg(vals, f, "demo")
    cs = circles(svg)
    assert len(cs) == 27
    assert [int(c.get("data-qubit")) for c in cs] == list(range(27))
    assert cs[26].get("fill") == RAMP[-1] and cs[0].get("fill") == RAMP[0]
    assert "average qubit utilization" in svg
    assert len(ET.fromstring(svg).findall(f".//{SVG}line")) >= 28


def test_all_zero_heatmap(tmp_path):
    t = make_table(counts=[0] * 27)
    out = render_heatmap(t, HeatmapSpec(parse_filter("q=6,O=2")), falcon_r4(), tmp_path / "h.svg")
    assert {c.get("fill") for c in circles(out.read_text())} == {RAMP[0]}


def test_filter_must_match_one_group(tmp_path):
    t = make_table(extra=True)
    with pytest.raises(ConfigurationError):
        render_heatmap(t, HeatmapSpec(parse_filter("q=6")), falcon_r4(), tmp_path / "x.svg")
    with pytest.raises(ConfigurationError):
        HeatmapSpec(parse_filter("q=7")).resolve(t)
    assert HeatmapSpec(parse_filter("q=6,d=20,r=1:1,O=1,L=sabre")).resolve(t).O == 1
    with pytest.raises(ConfigurationError):
        parse_filter("z=3")


def test_missing_coordinates():
    bare = ArchitectureSpec("bare", CouplingMap(3, [(0, 1), (1, 2)]), falcon_r4().basis)
    with pytest.raises(RenderError, match="force-layout"):
        heatmap_svg([0, 0, 0], bare)
