import numpy as np
import pytest

from exceptions.errors import FileError, RasterFormatError, ValidationError
from fileio.raster import NodataPolicy, RasterConfig, depth_function, parse_raster, read_raster

SQUARE = """NCOLS 2
NROWS 2
XLLCORNER 0
YLLCORNER 0
CELLSIZE 1
NODATA_VALUE -9999
1 2
3 4
"""


class TestParse:
    def test_rows_stored_south_first(self):
        raster = parse_raster(SQUARE)
        np.testing.assert_array_equal(raster.values, [[3.0, 4.0], [1.0, 2.0]])
        np.testing.assert_allclose(raster.node_x, [0.5, 1.5])

    def test_center_header(self):
        text = SQUARE.replace("XLLCORNER 0", "xllcenter 0.5").replace("YLLCORNER 0", "yllcenter 0.5")
        raster = parse_raster(text)
        assert (raster.xllcorner, raster.yllcorner) == (0.0, 0.0)

    def test_values_may_wrap_lines(self):
        raster = parse_raster(SQUARE.replace("1 2\n3 4", "1\n2 3\n4"))
        assert raster.values[1, 1] == 2.0

    def test_nodata_becomes_nan(self):
        raster = parse_raster(SQUARE.replace(" 4", " -9999"))
        assert np.isnan(raster.values[0, 1])

    @pytest.mark.parametrize("text", [
        SQUARE.replace("NCOLS 2", "NCOLS two"),
        SQUARE.replace("CELLSIZE 1", "CELLWIDTH 1"),
        SQUARE.replace("CELLSIZE 1\n", ""),
        SQUARE.replace("3 4", "3"),
        SQUARE.replace("3 4", "3 x"),
        SQUARE.replace("1 2\n3 4", "-9999 -9999\n-9999 -9999"),
        SQUARE.replace("CELLSIZE 1", "CELLSIZE 0"),
    ])
    def test_malformed(self, text):
        with pytest.raises(RasterFormatError):
            parse_raster(text, "bad.asc")

    def test_error_names_line(self):
        with pytest.raises(RasterFormatError) as exc:
            parse_raster(SQUARE.replace("NROWS 2", "NROWS 2 3"), "bad.asc")
        assert exc.value.line == 2
        assert "bad.asc:2" in str(exc.value)


class TestInterpolate:
    def test_center_of_nodes(self):
        assert parse_raster(SQUARE).interpolate(1.0, 1.0) == pytest.approx(2.5)

    def test_node_values(self):
        raster = parse_raster(SQUARE)
        np.testing.assert_allclose(raster.interpolate([0.5, 1.5, 0.5], [0.5, 0.5, 1.5]), [3.0, 4.0, 1.0])

    def test_clamped_outside(self):
        assert parse_raster(SQUARE).interpolate(-5.0, -5.0) == pytest.approx(3.0)

    def test_constant_raster(self):
        text = "ncols 3\nnrows 1\nxllcorner 0\nyllcorner 0\ncellsize 2\n7 7 7\n"
        raster = parse_raster(text)
        np.testing.assert_array_equal(raster.interpolate(np.linspace(-1.0, 7.0, 9), np.linspace(-3.0, 3.0, 9)), 7.0)


class TestNodataPolicies:
    def test_mean_policy(self, caplog):
        raster = parse_raster(SQUARE.replace(" 4", " -9999"))
        filled = raster.filled(NodataPolicy.MEAN)
        assert filled.values[0, 1] == pytest.approx(2.0)
        assert "nodata" in caplog.text

    def test_land_policy(self):
        raster = parse_raster(SQUARE.replace(" 4", " -9999"))
        assert raster.filled(NodataPolicy.LAND, -10.0).values[0, 1] == -10.0

    def test_complete_raster_untouched(self):
        raster = parse_raster(SQUARE)
        assert raster.filled() is raster

    def test_unknown_policy(self):
        with pytest.raises(ValidationError):
            RasterConfig(nodata_policy="nearest")


class TestDepthFunction:
    def test_positive_down(self):
        depth = depth_function(parse_raster(SQUARE), RasterConfig())
        assert depth(1.0, 1.0) == pytest.approx(2.5)

    def test_elevations_are_negated(self):
        depth = depth_function(parse_raster(SQUARE), RasterConfig(positive_down=False))
        assert depth(0.5, 0.5) == pytest.approx(-3.0)

    def test_nodata_land_is_dry(self):
        raster = parse_raster(SQUARE.replace(" 4", " -9999"))
        depth = depth_function(raster, RasterConfig(positive_down=False, land_elevation=10.0))
        assert depth(1.5, 0.5) == pytest.approx(-10.0)
        depth = depth_function(raster, RasterConfig(positive_down=True, land_elevation=10.0))
        assert depth(1.5, 0.5) == pytest.approx(-10.0)


class TestReadRaster:
    def test_read(self, tmp_path):
        path = tmp_path / "bathy.asc"
        path.write_text(SQUARE, encoding="utf-8")
        assert read_raster(path).ncols == 2

    def test_missing(self, tmp_path):
        with pytest.raises(FileError):
            read_raster(tmp_path / "none.asc")
