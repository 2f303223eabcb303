"""Embedding export tests: format, determinism, consumer round trip."""

import pytest

from ctxprob.embeddings import export_embeddings


class TestExport:
    def test_header_and_line_count(self, tmp_path):
        out = tmp_path / "vecs.txt"
        vocab = [f"tok{i}" for i in range(100)]
        export_embeddings(vocab, out, dim=300)
        lines = out.read_text(encoding="utf-8").splitlines()
        assert lines[0] == "100 300"
        assert len(lines) == 101

    def test_punctuation_token_all_zero(self, tmp_path):
        out = tmp_path / "vecs.txt"
        export_embeddings(["word", "!!!"], out, dim=8)
        lines = out.read_text().splitlines()
        bang = next(ln for ln in lines[1:] if ln.startswith("!!!"))
        assert all(float(x) == 0.0 for x in bang.split()[1:])
        word = next(ln for ln in lines[1:] if ln.startswith("word"))
        assert any(float(x) != 0.0 for x in word.split()[1:])

    def test_repeated_export_byte_identical(self, tmp_path):
        a, b = tmp_path / "a.txt", tmp_path / "b.txt"
        vocab = ["alpha", "beta", "gamma"]
        export_embeddings(vocab, a, dim=16)
        export_embeddings(vocab, b, dim=16)
        assert a.read_bytes() == b.read_bytes()

    def test_subset_from_source_file(self, tmp_path):
        source = tmp_path / "source.txt"
        source.write_text("3 4\nalpha 1 2 3 4\nbeta 5 6 7 8\nother 0 0 0 1\n",
                          encoding="utf-8")
        out = tmp_path / "out.txt"
        export_embeddings(["beta", "nothere"], out, source_path=source)
        lines = out.read_text().splitlines()
        assert lines[0] == "2 4"
        assert lines[1] == "beta 5 6 7 8"
        assert lines[2].split() == ["nothere", "0", "0", "0", "0"]

    def test_parses_with_consumer_loader(self, tmp_path):
        surprisalkit = pytest.importorskip("surprisalkit")
        out = tmp_path / "vecs.txt"
        export_embeddings(["one", "two", "three", ","], out, dim=12)
        table = surprisalkit.load_embeddings(out)
        assert table.dim == 12
        assert table.get("one") is not None
        assert not table.get(",").any()
