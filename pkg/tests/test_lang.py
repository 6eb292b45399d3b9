"""Lexer, parser, validator, and pretty-printer tests."""

import pathlib

import pytest

from salstream.errors import SalSemanticError, SalSyntaxError
from salstream.lang import parse_program, pretty, validate
from salstream.lang import ast
from salstream.lang.lexer import tokenize

CORPUS = pathlib.Path(__file__).parent / "corpus"

HEADER = """
WindowSize = 1000;
Netflows = VastStream("localhost", 9999);
PARTITION Netflows BY SourceIp, DestIp;
HASH SourceIp WITH IpHashFunction;
HASH DestIp WITH IpHashFunction;
VertsByDest = STREAM Netflows BY DestIp;
"""


def check(src: str):
    p = parse_program(src)
    return validate(p)


# --- lexer ---


def test_tokens_cover_punctuation_and_positions():
    toks = tokenize("A = topk(x, 1);\nB = 2esc;" .replace("esc", ""))
    kinds = [t.kind for t in toks]
    assert kinds[:9] == ["IDENT", "EQ", "IDENT", "LPAREN", "IDENT", "COMMA", "NUMBER", "RPAREN", "SEMI"]
    b = toks[9]
    assert (b.line, b.col) == (2, 1)


def test_keywords_case_insensitive_identifiers_case_sensitive():
    toks = tokenize("foreach FOREACH ForEach by By")
    assert [t.kind for t in toks[:-1]] == ["FOREACH"] * 3 + ["BY"] * 2
    src = HEADER + (
        "feature1 = foreach VertsByDest generate ave(SrcTotalBytes);\n"
        "Out = filter VertsByDest by feature1 > 10;\n"
    )
    check(src)
    bad = HEADER + (
        "feature1 = FOREACH VertsByDest GENERATE ave(SrcTotalBytes);\n"
        "Out = FILTER VertsByDest BY Feature1 > 10;\n"
    )
    with pytest.raises(SalSemanticError, match="unknown name 'Feature1'"):
        check(bad)


def test_comments_and_unterminated_string():
    p = parse_program("// only a comment\nWindowSize = 5; // trailing\n" + 'N = VastStream("h", 1);\nPARTITION N BY SourceIp;\n')
    assert p.consts[0].value == 5
    with pytest.raises(SalSyntaxError, match="unterminated"):
        tokenize('X = VastStream("oops, 9);')


def test_unexpected_character_reports_position():
    with pytest.raises(SalSyntaxError) as ei:
        tokenize("A = 1 %;")
    d = ei.value.diagnostics[0]
    assert (d.line, d.col) == (1, 7)
    assert "unexpected character" in d.message


# --- parser ---


def test_corpus_parses_and_validates():
    for name, n_pipeline, n_features in [
        ("ave_filter.sal", 3, 1),
        ("server_stats.sal", 14, 9),
        ("server_stats_full.sal", 16, 11),
    ]:
        src = (CORPUS / name).read_text()
        p = parse_program(src, name)
        assert len(p.pipeline) == n_pipeline
        tp = validate(p, name)
        assert len(tp.features) == n_features


def test_parse_positions_point_at_statements():
    src = (CORPUS / "ave_filter.sal").read_text()
    p = parse_program(src, "ave_filter.sal")
    assert p.pipeline[0].pos.line == 7
    assert p.pipeline[0].pos.col == 1


def test_expression_precedence_and_parens():
    src = HEADER + "Out = FILTER VertsByDest BY SrcTotalBytes + 2 * 3 - 1 > 4 / 2;\n"
    p = parse_program(src)
    pred = p.pipeline[-1].predicate
    assert isinstance(pred, ast.BinOp) and pred.op == ">"
    left = pred.left
    assert left.op == "-" and left.left.op == "+" and left.left.right.op == "*"
    src2 = HEADER + "Out = FILTER VertsByDest BY SrcTotalBytes * (SrcPayloadBytes + 2) > 1;\n"
    pred2 = parse_program(src2).pipeline[-1].predicate
    assert pred2.left.op == "*" and pred2.left.right.op == "+"


def test_chained_comparison_rejected():
    with pytest.raises(SalSyntaxError, match="chained"):
        parse_program(HEADER + "Out = FILTER VertsByDest BY 1 < SrcTotalBytes < 3;\n")


def test_keyword_as_identifier_rejected():
    with pytest.raises(SalSyntaxError, match="reserved keyword"):
        parse_program("filter = 3;\n")
    with pytest.raises(SalSyntaxError, match="reserved keyword"):
        parse_program("A = STREAM by BY DestIp;\n")


def test_missing_semicolon_position():
    with pytest.raises(SalSyntaxError) as ei:
        parse_program("WindowSize = 10\nNetflows = VastStream(\"h\", 1);\n")
    d = ei.value.diagnostics[0]
    assert "expected ';'" in d.message
    assert (d.line, d.col) == (2, 1)


def test_syntax_error_messages_name_expectation():
    cases = [
        ("A = FOREACH S GENERATE ave(SrcTotalBytes)", "expected ';'"),
        ("A = FOREACH S frobnicate x;", "expected 'GENERATE' or 'TRANSFORM'"),
        ("A = STREAM S BY ;", "expected key field"),
        ("A = COLLAPSE S BY DestIp;", "expected 'FOR'"),
        ("A = FILTER S BY x..;", "expected 'value' or 'prev'"),
        ("A = FOREACH S TRANSFORM (x) TimeDiff;", "expected ':'"),
    ]
    for src, frag in cases:
        with pytest.raises(SalSyntaxError, match=frag.replace("(", "\\(").replace(")", "\\)")):
            parse_program(src)


def test_accessor_forms():
    src = HEADER + (
        "T = FOREACH VertsByDest GENERATE topk(DestPort, 100, 10, 3);\n"
        "Out = FILTER VertsByDest BY T.value(2) > 0.5;\n"
    )
    tp = check(src)
    assert tp.features["T"].topk_args == (100, 10, 3)
    with pytest.raises(SalSyntaxError, match="unknown accessor"):
        parse_program(HEADER + "Out = FILTER VertsByDest BY T.third(2) > 0.5;\n")


# --- pretty round-trip ---


def test_pretty_round_trip_corpus():
    for name in ("ave_filter.sal", "server_stats.sal", "server_stats_full.sal"):
        p = parse_program((CORPUS / name).read_text(), name)
        text = pretty(p)
        assert parse_program(text) == p
        # printing is a fixed point
        assert pretty(parse_program(text)) == text


def test_pretty_preserves_association():
    src = HEADER + "Out = FILTER VertsByDest BY SrcTotalBytes - (SrcPayloadBytes - 2) > 1 * (2 + 3);\n"
    p = parse_program(src)
    assert parse_program(pretty(p)) == p
    assert "- (SrcPayloadBytes - 2)" in pretty(p)


# --- validator ---


def test_duplicate_definition():
    src = HEADER + "VertsByDest = STREAM Netflows BY SourceIp;\n"
    with pytest.raises(SalSemanticError, match="duplicate definition of 'VertsByDest'"):
        check(src)


def test_unknown_stream_and_field():
    with pytest.raises(SalSemanticError, match="unknown stream 'Nope'"):
        check(HEADER + "F = FOREACH Nope GENERATE ave(SrcTotalBytes);\n")
    with pytest.raises(SalSemanticError, match="not a field"):
        check(HEADER + "F = FOREACH VertsByDest GENERATE ave(Bogus);\n")


def test_unsupported_operator_diagnostic():
    for op in ("max", "min", "autocorrelation"):
        with pytest.raises(SalSemanticError, match=f"operator '{op}' is recognized but not supported"):
            check(HEADER + f"F = FOREACH VertsByDest GENERATE {op}(SrcTotalBytes);\n")
    with pytest.raises(SalSemanticError, match="unknown operator 'wavelet'"):
        check(HEADER + "F = FOREACH VertsByDest GENERATE wavelet(SrcTotalBytes);\n")


def test_keyed_stream_required():
    with pytest.raises(SalSemanticError, match="not keyed"):
        check(HEADER + "F = FOREACH Netflows GENERATE ave(SrcTotalBytes);\n")
    with pytest.raises(SalSemanticError, match="not keyed"):
        check(HEADER + "F = FILTER Netflows BY SrcTotalBytes > 1;\n")


def test_stream_by_requires_partition_field():
    with pytest.raises(SalSemanticError, match="not a PARTITION field"):
        check(HEADER + "ByPort = STREAM Netflows BY IpLayerProtocol;\n")


def test_window_size_required():
    src = (
        'Netflows = VastStream("localhost", 9999);\n'
        "PARTITION Netflows BY DestIp;\n"
        "V = STREAM Netflows BY DestIp;\n"
        "F = FOREACH V GENERATE ave(SrcTotalBytes);\n"
    )
    with pytest.raises(SalSemanticError, match="no WindowSize"):
        check(src)


def test_declarations_must_precede_pipeline():
    src = HEADER + "F = FOREACH VertsByDest GENERATE ave(SrcTotalBytes);\nHASH SourceIp WITH IpHashFunction;\n"
    with pytest.raises(SalSemanticError, match="before the first pipeline statement"):
        check(src)


def test_topk_signature_checks():
    with pytest.raises(SalSemanticError, match="takes \\(field, windowSize"):
        check(HEADER + "T = FOREACH VertsByDest GENERATE topk(DestPort, 100);\n")
    with pytest.raises(SalSemanticError, match="cannot exceed the window"):
        check(HEADER + "T = FOREACH VertsByDest GENERATE topk(DestPort, 100, 200, 2);\n")
    with pytest.raises(SalSemanticError, match="out of range"):
        check(
            HEADER
            + "T = FOREACH VertsByDest GENERATE topk(DestPort, 100, 10, 2);\n"
            + "Out = FILTER VertsByDest BY T.value(2) > 0.1;\n"
        )


def test_value_only_on_topk_and_prev_only_in_transform():
    with pytest.raises(SalSemanticError, match="only defined for topk"):
        check(
            HEADER
            + "F = FOREACH VertsByDest GENERATE ave(SrcTotalBytes);\n"
            + "Out = FILTER VertsByDest BY F.value(0) > 0.1;\n"
        )
    with pytest.raises(SalSemanticError, match="only allowed in TRANSFORM"):
        check(HEADER + "Out = FILTER VertsByDest BY TimeSeconds.prev(1) > 0.1;\n")
    with pytest.raises(SalSemanticError, match="must be read with .value"):
        check(
            HEADER
            + "T = FOREACH VertsByDest GENERATE topk(DestPort, 100, 10, 2);\n"
            + "Out = FILTER VertsByDest BY T > 0.1;\n"
        )


def test_prev_index_must_be_positive():
    with pytest.raises(SalSemanticError, match="prev\\(\\) index must be >= 1"):
        check(HEADER + "T = FOREACH VertsByDest TRANSFORM (TimeSeconds.prev(0)) : X;\n")


def test_transform_rejects_features():
    src = HEADER + (
        "F = FOREACH VertsByDest GENERATE ave(SrcTotalBytes);\n"
        "T = FOREACH VertsByDest TRANSFORM (F + 1) : X;\n"
    )
    with pytest.raises(SalSemanticError, match="not supported in TRANSFORM"):
        check(src)


def test_transform_output_schema_usable_downstream():
    src = HEADER + (
        "T = FOREACH VertsByDest TRANSFORM (TimeSeconds - TimeSeconds.prev(1)) : Gap, (DurationSeconds * 2) : Dur2;\n"
        "F = FOREACH T GENERATE ave(Gap);\n"
    )
    tp = check(src)
    assert tp.streams["T"].schema == {"DestIp": str, "Gap": float, "Dur2": float}
    assert tp.features["F"].keys == ("DestIp",)


def test_collapse_checks():
    base = HEADER + (
        "DestSrc = STREAM Netflows BY DestIp, SourceIp;\n"
        "G = FOREACH DestSrc GENERATE ave(SrcTotalBytes);\n"
    )
    tp = check(base + "C = COLLAPSE DestSrc BY DestIp FOR G;\n")
    assert tp.streams["C"].keys == ("DestIp",)
    with pytest.raises(SalSemanticError, match="must drop at least one key"):
        check(base + "C = COLLAPSE DestSrc BY DestIp, SourceIp FOR G;\n")
    with pytest.raises(SalSemanticError, match="kept key 'DestPort' is not a key"):
        check(base + "C = COLLAPSE DestSrc BY DestPort FOR G;\n")
    with pytest.raises(SalSemanticError, match="unknown feature 'Zip'"):
        check(base + "C = COLLAPSE DestSrc BY DestIp FOR Zip;\n")


def test_collapsed_consumer_ops():
    base = HEADER + (
        "DestSrc = STREAM Netflows BY DestIp, SourceIp;\n"
        "G = FOREACH DestSrc GENERATE ave(SrcTotalBytes);\n"
        "C = COLLAPSE DestSrc BY DestIp FOR G;\n"
    )
    tp = check(base + "A = FOREACH C GENERATE ave(G);\n")
    assert tp.features["A"].kind == "collapsed"
    with pytest.raises(SalSemanticError, match="not supported on collapsed"):
        check(base + "A = FOREACH C GENERATE countdistinct(G);\n")
    with pytest.raises(SalSemanticError, match="is not collapsed by"):
        check(base + "A = FOREACH C GENERATE ave(SrcTotalBytes);\n")


def test_feature_cross_stream_read_rejected():
    src = HEADER + (
        "BySrc = STREAM Netflows BY SourceIp;\n"
        "F = FOREACH BySrc GENERATE ave(SrcTotalBytes);\n"
        "Out = FILTER VertsByDest BY F > 1;\n"
    )
    with pytest.raises(SalSemanticError, match="keyed by stream 'BySrc'"):
        check(src)


def test_feature_readable_through_filter_chain():
    src = HEADER + (
        "F = FOREACH VertsByDest GENERATE ave(SrcTotalBytes);\n"
        "Mid = FILTER VertsByDest BY F > 1;\n"
        "Out = FILTER Mid BY F > 2;\n"
    )
    check(src)


def test_diagnostic_rendering_format():
    src = HEADER + "F = FOREACH VertsByDest GENERATE ave(Bogus);\n"
    with pytest.raises(SalSemanticError) as ei:
        validate(parse_program(src, "prog.sal"), "prog.sal")
    line = str(ei.value.diagnostics[0])
    assert line.startswith("prog.sal:8:") and ": error: " in line


def test_multiple_errors_collected_in_order():
    src = HEADER + (
        "A = FOREACH VertsByDest GENERATE ave(Bogus);\n"
        "B = FOREACH VertsByDest GENERATE wavelet(SrcTotalBytes);\n"
    )
    with pytest.raises(SalSemanticError) as ei:
        check(src)
    msgs = [d.message for d in ei.value.diagnostics]
    assert len(msgs) == 2 and "Bogus" in msgs[0] and "wavelet" in msgs[1]
