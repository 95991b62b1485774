import io

import pytest

from adi.bioc import BiocFormatError, read_bioc_subset

GOOD = """<?xml version="1.0" encoding="UTF-8"?>
<collection>
  <source>fixture</source>
  <document>
    <id>doc1</id>
    <passage>
      <offset>0</offset>
      <text>heat shock protein (HSP) was elevated.</text>
      <annotation id="A1">
        <infon key="type">SF</infon>
        <location offset="20" length="3"/>
        <text>HSP</text>
      </annotation>
      <annotation id="A2">
        <infon key="type">LF</infon>
        <location offset="0" length="18"/>
        <text>heat shock protein</text>
      </annotation>
      <relation id="R1">
        <infon key="type">ABBR</infon>
        <node refid="A1" role="SF"/>
        <node refid="A2" role="LF"/>
      </relation>
    </passage>
  </document>
</collection>
"""

MISMATCHED = GOOD.replace('offset="20" length="3"', 'offset="21" length="3"')

EMPTY = '<?xml version="1.0"?>\n<collection><source>x</source></collection>\n'

SECOND_PASSAGE = """<?xml version="1.0"?>
<collection>
  <document>
    <id>doc2</id>
    <passage>
      <offset>0</offset>
      <text>Title here.</text>
    </passage>
    <passage>
      <offset>12</offset>
      <text>healthy controls (HC) were enrolled.</text>
      <annotation id="B1">
        <location offset="30" length="2"/>
        <text>HC</text>
      </annotation>
      <annotation id="B2">
        <location offset="12" length="16"/>
        <text>healthy controls</text>
      </annotation>
      <relation id="R2">
        <node refid="B1" role="ShortForm"/>
        <node refid="B2" role="LongForm"/>
      </relation>
    </passage>
  </document>
</collection>
"""


def write(tmp_path, name, content):
    path = tmp_path / name
    path.write_text(content, encoding="utf-8")
    return path


class TestReadBioc:
    def test_single_pair(self, tmp_path):
        collection = read_bioc_subset(write(tmp_path, "good.xml", GOOD))
        assert collection.skipped_annotations == 0
        gold = collection.to_gold("fixture")
        assert gold.entries == {"doc1": {("HSP", "heat shock protein")}}
        docs = collection.to_documents()
        assert docs[0].id == "doc1"
        assert docs[0].text.startswith("heat shock protein (HSP)")

    def test_mismatched_offset_skipped_with_count(self, tmp_path):
        warn = io.StringIO()
        collection = read_bioc_subset(
            write(tmp_path, "bad.xml", MISMATCHED), warn=warn
        )
        assert collection.skipped_annotations == 1
        # the document stays in the gold set, just without the broken pair
        assert collection.to_gold("g").entries == {"doc1": set()}
        assert "A1" in warn.getvalue()

    def test_empty_collection(self, tmp_path):
        collection = read_bioc_subset(write(tmp_path, "empty.xml", EMPTY))
        assert collection.documents == []
        assert collection.to_documents() == []

    def test_multi_passage_absolute_offsets(self, tmp_path):
        collection = read_bioc_subset(write(tmp_path, "two.xml", SECOND_PASSAGE))
        gold = collection.to_gold("g")
        assert gold.entries == {"doc2": {("HC", "healthy controls")}}
        doc = collection.to_documents()[0]
        assert doc.text[12:28] == "healthy controls"
        assert doc.text[30:32] == "HC"

    def test_malformed_markup_reports_byte_offset(self, tmp_path):
        broken = GOOD.replace("</collection>", "</collectio")
        with pytest.raises(BiocFormatError, match="byte offset"):
            read_bioc_subset(write(tmp_path, "broken.xml", broken))

    def test_wrong_root_element(self, tmp_path):
        with pytest.raises(BiocFormatError, match="collection"):
            read_bioc_subset(write(tmp_path, "root.xml", "<xml><a/></xml>"))

    def test_document_without_id(self, tmp_path):
        content = GOOD.replace("<id>doc1</id>", "")
        with pytest.raises(BiocFormatError, match="id"):
            read_bioc_subset(write(tmp_path, "noid.xml", content))
