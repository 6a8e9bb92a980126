"""Tests for file_utils module."""

from joint_mixreg.utils.file_utils import atomic_write_text, derived_path, ensure_directory


class TestEnsureDirectory:
    """Tests for ensure_directory function."""

    def test_creates_nested_directories(self, tmp_path):
        """Should create nested directories."""
        nested_dir = tmp_path / "level1" / "level2"
        assert not nested_dir.exists()

        result = ensure_directory(nested_dir)

        assert nested_dir.is_dir()
        assert result == nested_dir

    def test_existing_directory_ok(self, tmp_path):
        """Should handle an already existing directory."""
        existing_dir = tmp_path / "existing"
        existing_dir.mkdir()

        assert ensure_directory(existing_dir) == existing_dir


class TestAtomicWriteText:
    """Tests for atomic_write_text function."""

    def test_writes_content(self, tmp_path):
        """Should write the full text and return the path."""
        target = tmp_path / "out" / "model.json"

        result = atomic_write_text(target, "{}\n")

        assert result == target
        assert target.read_text(encoding="utf-8") == "{}\n"

    def test_replaces_existing_file(self, tmp_path):
        """Should overwrite an existing file in one step."""
        target = tmp_path / "table.csv"
        target.write_text("old")

        atomic_write_text(target, "new")

        assert target.read_text() == "new"

    def test_uses_lf_line_endings(self, tmp_path):
        """Should never translate newlines."""
        target = tmp_path / "a.csv"

        atomic_write_text(target, "a\nb\n")

        assert target.read_bytes() == b"a\nb\n"

    def test_leaves_no_temporary_files(self, tmp_path):
        """Should clean up its temporary file."""
        atomic_write_text(tmp_path / "a.csv", "x")

        assert [p.name for p in tmp_path.iterdir()] == ["a.csv"]


class TestDerivedPath:
    """Tests for derived_path function."""

    def test_replaces_suffix(self, tmp_path):
        assert derived_path(tmp_path / "model.json", ".bic.csv") == tmp_path / "model.bic.csv"

    def test_without_suffix(self, tmp_path):
        assert derived_path(tmp_path / "cv", ".folds.csv") == tmp_path / "cv.folds.csv"
