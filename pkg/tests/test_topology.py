import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from semescape.errors import EmptySet
from semescape.escape import CODE_BND, CODE_ESC, CODE_UND, Raster, compute_grid
from semescape.maps import ExpAffine
from semescape.topology import (
    boundary,
    boundary_csv_lines,
    component_report,
    connected_components,
    dilate,
    hausdorff_px,
    mask_from_pixels,
    unbounded_proxy,
)

WINDOW = (-1.0, 1.0, -1.0, 1.0)


def raster_from_cells(cells) -> Raster:
    cells = np.asarray(cells, dtype=np.uint8)
    h, w = cells.shape
    return Raster(WINDOW, w, h, cells)


def all_esc(n=6) -> Raster:
    return raster_from_cells(np.full((n, n), CODE_ESC))


def lone_interior_pixel(n=7) -> Raster:
    cells = np.full((n, n), CODE_BND)
    cells[n // 2, n // 2] = CODE_ESC
    return raster_from_cells(cells)


class TestConnectedComponents:
    def test_all_escaping_single_component(self):
        cs = connected_components(all_esc(), 8)
        assert len(cs.components) == 1
        comp = cs.components[0]
        assert comp.pixel_count == 36
        assert comp.touches_border

    def test_interior_pixel_does_not_touch(self):
        cs = connected_components(lone_interior_pixel(), 8)
        assert len(cs.components) == 1
        assert not cs.components[0].touches_border

    def test_connectivity_choice_matters_on_diagonal(self):
        cells = np.full((4, 4), CODE_BND)
        cells[0, 0] = cells[1, 1] = CODE_ESC
        r = raster_from_cells(cells)
        assert len(connected_components(r, 8).components) == 1
        assert len(connected_components(r, 4).components) == 2

    def test_invalid_connectivity(self):
        with pytest.raises(ValueError):
            connected_components(all_esc(), 6)

    def test_label_order_row_major(self):
        cells = np.full((3, 5), CODE_BND)
        cells[0, 3] = CODE_ESC  # first in row-major order
        cells[2, 0] = CODE_ESC
        cs = connected_components(raster_from_cells(cells), 8)
        assert cs.labels[0, 3] == 0
        assert cs.labels[2, 0] == 1

    @given(st.integers(0, 2 ** 20 - 1))
    @settings(max_examples=60, deadline=None)
    def test_labels_partition_escaping_pixels(self, bits):
        cells = np.where(
            np.array([(bits >> k) & 1 for k in range(20)]).reshape(4, 5) == 1,
            CODE_ESC, CODE_BND).astype(np.uint8)
        cs = connected_components(raster_from_cells(cells), 8)
        esc = cells == CODE_ESC
        assert ((cs.labels >= 0) == esc).all()
        assert sum(c.pixel_count for c in cs.components) == int(esc.sum())
        for c in cs.components:
            rmin, cmin, rmax, cmax = c.bbox
            inside = cs.labels[rmin:rmax + 1, cmin:cmax + 1] == c.id
            assert inside.sum() == c.pixel_count

    def test_duality_fixtures_stable_under_connectivity(self):
        for r in (all_esc(), lone_interior_pixel()):
            assert len(connected_components(r, 8).components) == len(
                connected_components(r, 4).components)


class TestUnboundedProxy:
    def test_cases(self):
        assert unbounded_proxy(connected_components(all_esc(), 8)).violating_components == ()
        rep = unbounded_proxy(connected_components(lone_interior_pixel(), 8))
        assert len(rep.violating_components) == 1
        assert rep.component_count == 1

    def test_exp_raster_components_touch_border(self):
        r = compute_grid(ExpAffine(1.0), (-4, 4, -4, 4), 128, 128)
        rep = unbounded_proxy(connected_components(r, 8))
        assert rep.violating_components == ()


class TestBoundary:
    def test_homogeneous_raster_has_empty_boundary(self):
        assert not boundary(all_esc()).any()

    def test_half_plane_split(self):
        cells = np.full((6, 6), CODE_BND)
        cells[:, :3] = CODE_ESC
        bd = boundary(raster_from_cells(cells))
        want = np.zeros((6, 6), dtype=bool)
        want[:, 2] = True  # escaping side of the split
        want[:, 3] = True  # bounded side of the split
        assert np.array_equal(bd, want)

    def test_undetermined_pixels_excluded(self):
        cells = np.full((5, 5), CODE_BND)
        cells[:, 0] = CODE_ESC
        cells[:, 1] = CODE_UND  # buffer between the classes
        bd = boundary(raster_from_cells(cells))
        assert not bd.any()

    def test_csv_lines_sorted(self):
        mask = mask_from_pixels([(2, 1), (0, 3), (2, 0)], (4, 4))
        lines = list(boundary_csv_lines(mask))
        assert lines == ["i,j", "0,3", "2,0", "2,1"]


class TestHausdorff:
    def test_identical_sets(self):
        m = mask_from_pixels([(1, 1), (2, 3)], (5, 5))
        assert hausdorff_px(m, m) == 0.0

    def test_one_pixel_ring(self):
        a = mask_from_pixels([(3, 3)], (7, 7))
        b = dilate(a, connectivity=4)
        assert hausdorff_px(a, b) == 1.0

    def test_three_four_five(self):
        a = mask_from_pixels([(0, 0)], (6, 6))
        b = mask_from_pixels([(3, 4)], (6, 6))
        assert hausdorff_px(a, b) == 5.0

    def test_empty_raises(self):
        m = mask_from_pixels([(0, 0)], (3, 3))
        with pytest.raises(EmptySet):
            hausdorff_px(m, np.zeros((3, 3), dtype=bool))

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            hausdorff_px(np.ones((2, 2), bool), np.ones((3, 3), bool))

    @given(st.integers(1, 2 ** 12 - 1), st.integers(1, 2 ** 12 - 1))
    @settings(max_examples=60, deadline=None)
    def test_symmetry_and_identity(self, bits_a, bits_b):
        a = np.array([(bits_a >> k) & 1 for k in range(12)], dtype=bool).reshape(3, 4)
        b = np.array([(bits_b >> k) & 1 for k in range(12)], dtype=bool).reshape(3, 4)
        d1 = hausdorff_px(a, b)
        d2 = hausdorff_px(b, a)
        assert d1 == d2 >= 0.0
        assert (d1 == 0.0) == np.array_equal(a, b)


class TestDilate:
    def test_eight_ring_includes_diagonal(self):
        a = mask_from_pixels([(2, 2)], (5, 5))
        d8 = dilate(a, 8)
        assert d8[1, 1] and d8[3, 3] and d8[2, 1]
        d4 = dilate(a, 4)
        assert not d4[1, 1] and d4[2, 1]
        assert d8.sum() == 9 and d4.sum() == 5

    def test_contains_original(self):
        rng = np.random.default_rng(3)
        a = rng.uniform(size=(8, 8)) < 0.3
        assert (dilate(a) & a).sum() == a.sum()


class TestReport:
    def test_component_report_schema(self):
        rep = component_report(connected_components(lone_interior_pixel(), 8))
        assert rep["component_count"] == 1
        entry = rep["components"][0]
        assert set(entry) == {"id", "pixel_count", "bbox", "touches_border"}
