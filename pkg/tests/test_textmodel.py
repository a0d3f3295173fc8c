import pytest
from hypothesis import given, strategies as st

from morphoforge.exceptions import DecodeError, MorphoforgeError, StructureError
from morphoforge.textmodel import (AccDictionary, GraphematicSegmenter, RawDocument, Sentence,
                                   TokenClass, WordForm, decode_utf8, index_key, index_structure,
                                   join, segment, split_streams, structure_to_dict)

from oracles import reference_sentences

ACC = AccDictionary.parse("т.д.\tabbr\nт.ч.\tabbr\nСША\tabbr,noun\tcase\n")

CURATED = [
    "Процес аналізу. Кінець.",
    "Мама мила раму! Тато читав газету? Так.",
    "Одне речення без крапки",
    "Перше…  Друге речення.\n\nНовий абзац тут.",
    "слово-з-дефісом і п'ять кроків. Далі.",
]


def surfaces(gs):
    return [[wf.surface for wf in s.wordforms] for s in gs.sentences]


def test_empty_text_has_no_sentences():
    gs = segment(RawDocument("d", ""))
    assert gs.sentences == ()
    assert join(gs) == ""


def test_two_sentences_example():
    gs = segment(RawDocument("d", "Процес аналізу. Кінець."))
    assert surfaces(gs) == [["Процес", "аналізу", "."], ["Кінець", "."]]


@pytest.mark.parametrize("text", CURATED)
def test_matches_reference_tokenizer(text):
    assert surfaces(segment(RawDocument("d", text))) == reference_sentences(text)


def test_blank_line_splits_even_without_terminator():
    gs = segment(RawDocument("d", "перший рядок\n\nдругий рядок"))
    assert surfaces(gs) == [["перший", "рядок"], ["другий", "рядок"]]
    assert gs.sections == ((1,), (2,))
    assert not gs.sentences[0].terminated


def test_acc_entry_is_one_token_and_does_not_split():
    text = "Ми читали книги, журнали і т.д. Потім відпочивали."
    gs = segment(RawDocument("d", text), ACC)
    words = [wf for wf in gs.wordforms() if wf.surface == "т.д."]
    assert len(words) == 1 and words[0].token_class is TokenClass.ACC
    # an ACC token never closes a sentence, even before a capital
    assert len(gs.sentences) == 1
    assert join(gs) == text


def test_acc_inside_sentence_keeps_sentence_whole():
    gs = segment(RawDocument("d", "Книги, журнали і т.д. були на столі."), ACC)
    assert len(gs.sentences) == 1


def test_case_sensitive_acc_entry():
    gs = segment(RawDocument("d", "США і сша."), ACC)
    classes = [wf.token_class for wf in gs.wordforms()]
    assert classes[0] is TokenClass.ACC and classes[2] is TokenClass.WORD


def test_acc_respects_word_boundaries():
    acc = AccDictionary.parse("ім.\tabbr\n")
    gs = segment(RawDocument("d", "Вулиця ім. Шевченка та їм."), acc)
    assert [wf.surface for wf in gs.wordforms()][:3] == ["Вулиця", "ім.", "Шевченка"]
    assert "їм" in [wf.surface for wf in gs.wordforms()]


def test_decode_error_reports_offset():
    with pytest.raises(DecodeError) as info:
        decode_utf8("абв".encode() + b"\xff")
    assert info.value.offset == 6


def test_byte_spans_point_into_source():
    text = "Ось  текст, де є пробіли. Кінець!"
    raw = text.encode()
    gs = segment(RawDocument("d", text))
    for wf in gs.wordforms():
        assert raw[wf.span[0]:wf.span[1]].decode() == wf.surface


def test_indexing_example():
    gs = index_structure(segment(RawDocument("d", "Один два три. Чотири пять шість.".replace(".", " .", 0))))
    idx = [wf.index for wf in gs.wordforms()]
    assert idx[0] == "1.1.1" and idx[-1] == "1.2.4"
    assert gs.sentences[1].dotted_index == "1.2"


def test_reindexing_is_idempotent():
    gs = index_structure(segment(RawDocument("d", CURATED[1])))
    assert index_structure(gs) == gs


def test_out_of_order_positions_rejected():
    a = WordForm(2, "б", TokenClass.WORD, (2, 4))
    b = WordForm(1, "а", TokenClass.WORD, (0, 2))
    with pytest.raises(StructureError):
        Sentence(1, (a, b))


def test_overlapping_spans_rejected():
    a = WordForm(1, "аб", TokenClass.WORD, (0, 4))
    b = WordForm(2, "в", TokenClass.WORD, (2, 4))
    with pytest.raises(StructureError):
        Sentence(1, (a, b))


def test_split_streams_examples():
    gs = index_structure(segment(RawDocument("d", "Тут немає скорочень."), ACC))
    compute, acc_list = split_streams(gs.sentences[0], ACC)
    assert acc_list == [] and [w.surface for w in compute] == ["Тут", "немає", "скорочень"]

    gs = index_structure(segment(RawDocument("d", "т.д. т.ч."), ACC))
    compute, acc_list = split_streams(gs.sentences[0], ACC)
    assert compute == [] and [w.surface for w, _ in acc_list] == ["т.д.", "т.ч."]
    assert acc_list[0][1] is ACC.lookup("т.д.").record


def test_split_streams_needs_index():
    gs = segment(RawDocument("d", "Слово."))
    with pytest.raises(StructureError):
        split_streams(gs.sentences[0], ACC)


def test_split_streams_mixed_matches_membership_oracle():
    text = "США і т.д. разом з т.ч. та словами."
    gs = index_structure(segment(RawDocument("d", text), ACC))
    compute, acc_list = split_streams(gs.sentences[0], ACC)
    words = [wf for wf in gs.sentences[0].wordforms if wf.is_word]
    keys = {"т.д.", "т.ч.", "США"}
    assert [w.surface for w, _ in acc_list] == [w.surface for w in words if w.surface in keys]
    assert [w.surface for w in compute] == [w.surface for w in words if w.surface not in keys]


def test_acc_file_rejects_bad_lines():
    with pytest.raises(MorphoforgeError):
        AccDictionary.parse("без табуляції\n")


def test_segmenter_estimator():
    seg = GraphematicSegmenter(acc=ACC)
    out = seg.fit_transform(["Перше. Друге.", "Третє."])
    assert [s.dotted_index for s in out[1].sentences] == ["2.1"]
    assert seg.get_params()["index"] is True


def test_structure_dict_has_every_wordform():
    gs = index_structure(segment(RawDocument("d", CURATED[0])))
    d = structure_to_dict(gs)
    assert sum(len(s["wordforms"]) for s in d["sentences"]) == len(list(gs.wordforms()))


text_strategy = st.text(
    alphabet=st.one_of(st.sampled_from(list("абвгґдеєжзиіїйклмнопрстуфхцчшщьюяАБВ .,!?…'-\n\t т.д.12")),
                       st.characters(blacklist_categories=("Cs",))),
    max_size=120)


@given(text_strategy)
def test_round_trip_property(text):
    gs = segment(RawDocument("d", text), ACC)
    assert join(gs) == text


@given(text_strategy)
def test_index_order_property(text):
    gs = index_structure(segment(RawDocument("d", text), ACC))
    keys = [index_key(wf.index) for wf in gs.wordforms()]
    assert keys == sorted(keys)
    spans = [wf.span for wf in gs.wordforms()]
    assert spans == sorted(spans)


@given(text_strategy)
def test_segment_is_deterministic(text):
    assert segment(RawDocument("d", text), ACC) == segment(RawDocument("d", text), ACC)
