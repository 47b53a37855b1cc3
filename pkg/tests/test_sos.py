import json

import numpy as np
import pytest

from soskit.features import extract_orientation_features
from soskit.parts import PARTS
from soskit.quantize import symbol_id
from soskit.saliency import SaliencyTrack, saliency_all_parts
from soskit.sos import (
    SOSEntry,
    SOSError,
    SOSScript,
    parse_sos_json,
    sample_percentile_masks,
    serialize_sos_json,
    sms_mask,
    sms_mask_percentile,
    synthesize_sos,
)


def tracks_from(rows):
    """Build six SaliencyTracks from a dict part -> list; others zero."""
    T = len(next(iter(rows.values())))
    return tuple(SaliencyTrack(s=np.array(rows.get(p, [0.0] * T), dtype=float)) for p in PARTS)


def test_sms_keeps_peak_at_half_threshold():
    tracks = tracks_from({"LA": [0, 0, 14.14, 0]})
    mask = sms_mask(tracks, 14.14, theta=0.5)
    assert mask.kept["LA"] == {2}
    for part in PARTS:
        if part != "LA":
            assert mask.kept[part] == frozenset()


def test_sms_theta_zero_keeps_all_positive():
    tracks = tracks_from({"LA": [0, 3, 0, 1, 2]})
    mask = sms_mask(tracks, 3.0, theta=0.0)
    assert mask.kept["LA"] == {1, 3, 4}


def test_sms_theta_one_keeps_only_max():
    tracks = tracks_from({"LA": [0, 3, 0, 1, 3]})
    mask = sms_mask(tracks, 3.0, theta=1.0)
    assert mask.kept["LA"] == {1, 4}


def test_sms_zero_global_max_empty():
    mask = sms_mask(tracks_from({"LA": [0, 0, 0]}), 0.0, theta=0.3)
    assert all(not f for f in mask.kept.values())


def test_sms_theta_out_of_range():
    tracks = tracks_from({"LA": [0, 1]})
    with pytest.raises(SOSError, match=r"\[0, 1\]"):
        sms_mask(tracks, 1.0, theta=1.5)
    with pytest.raises(SOSError):
        sms_mask(tracks, 1.0, theta=-0.1)


def test_sms_monotone_nesting(wavy, arm_swing, tpose):
    for motion in (wavy, arm_swing, tpose):
        tracks, gmax = saliency_all_parts(extract_orientation_features(motion))
        prev = None
        for theta in (0.0, 0.3, 0.5, 0.7, 0.9, 1.0):
            kept = {(p, f) for p, f in sms_mask(tracks, gmax, theta).cells()}
            if prev is not None:
                assert kept <= prev
            prev = kept


def test_percentile_zero_matches_theta_zero(wavy):
    tracks, gmax = saliency_all_parts(extract_orientation_features(wavy))
    a = sms_mask(tracks, gmax, 0.0)
    b = sms_mask_percentile(tracks, 0.0)
    assert a.kept == b.kept


def test_percentile_one_keeps_part_maxima():
    tracks = tracks_from({"LA": [0, 1, 5, 2], "RA": [0, 4, 4, 0]})
    mask = sms_mask_percentile(tracks, 1.0)
    assert mask.kept["LA"] == {2}
    assert mask.kept["RA"] == {1, 2}
    assert mask.kept["RT"] == frozenset()  # no positive saliency


def test_percentile_sampler_deterministic(wavy):
    tracks, _ = saliency_all_parts(extract_orientation_features(wavy))
    a = sample_percentile_masks(tracks, 3, seed=42)
    b = sample_percentile_masks(tracks, 3, seed=42)
    assert [m.kept for m in a] == [m.kept for m in b]
    c = sample_percentile_masks(tracks, 3, seed=43)
    assert [m.kept for m in a] != [m.kept for m in c]


def test_synthesize_empty_mask(tpose):
    o = extract_orientation_features(tpose)
    tracks, gmax = saliency_all_parts(o)
    script = synthesize_sos(o, sms_mask(tracks, gmax, 0.9), fps=tpose.fps)
    assert script.entries == ()
    assert script.density() == 0.0


def test_synthesize_arm_swing_peak(arm_swing):
    o = extract_orientation_features(arm_swing)
    tracks, gmax = saliency_all_parts(o)
    script = synthesize_sos(o, sms_mask(tracks, gmax, 0.9), fps=arm_swing.fps)
    assert [(e.part, e.frame, e.symbol_id) for e in script.entries] == [
        ("LA", 18, symbol_id("Forward-Top", "LA"))
    ]


def test_synthesize_include_first_frame(arm_swing):
    o = extract_orientation_features(arm_swing)
    tracks, gmax = saliency_all_parts(o)
    script = synthesize_sos(o, sms_mask(tracks, gmax, 0.9), fps=arm_swing.fps, include_first_frame=True)
    frame0 = [e for e in script.entries if e.frame == 0]
    assert {e.part for e in frame0} == set(PARTS)
    la0 = next(e for e in frame0 if e.part == "LA")
    assert la0.symbol_id == symbol_id("Place-Low", "LA")


def test_density_non_increasing_in_theta(wavy):
    o = extract_orientation_features(wavy)
    tracks, gmax = saliency_all_parts(o)
    densities = [
        synthesize_sos(o, sms_mask(tracks, gmax, th), fps=wavy.fps).density()
        for th in (0.1, 0.3, 0.5, 0.7, 0.9)
    ]
    assert densities == sorted(densities, reverse=True)


def test_script_validation():
    ok = SOSEntry(frame=1, part="LA", symbol_id=3)
    with pytest.raises(SOSError, match="duplicate"):
        SOSScript(fps=20, num_frames=4, entries=(ok, SOSEntry(1, "LA", 5)))
    with pytest.raises(SOSError, match="outside"):
        SOSScript(fps=20, num_frames=4, entries=(SOSEntry(4, "LA", 3),))
    with pytest.raises(SOSError, match="invalid for part"):
        SOSScript(fps=20, num_frames=4, entries=(SOSEntry(0, "RT", 8),))
    with pytest.raises(SOSError, match="valid parts"):
        SOSScript(fps=20, num_frames=4, entries=(SOSEntry(0, "XX", 0),))


def test_entries_sorted_by_frame_then_part():
    entries = (SOSEntry(5, "SP", 1), SOSEntry(2, "RA", 3), SOSEntry(2, "LA", 0))
    script = SOSScript(fps=20, num_frames=8, entries=entries)
    assert [(e.frame, e.part) for e in script.entries] == [(2, "LA"), (2, "RA"), (5, "SP")]


def test_json_round_trip():
    script = SOSScript(
        fps=20.0,
        num_frames=30,
        entries=(SOSEntry(18, "LA", symbol_id("Forward-Top", "LA")), SOSEntry(3, "RT", 2)),
        text="wave hello",
    )
    text = serialize_sos_json(script)
    again = parse_sos_json(text)
    assert again == script
    assert serialize_sos_json(again) == text


def test_json_symbol_names_in_wire_format():
    script = SOSScript(fps=20.0, num_frames=20, entries=(SOSEntry(18, "LA", symbol_id("Forward-Top", "LA")),))
    doc = json.loads(serialize_sos_json(script))
    assert doc["entries"] == [{"part": "LA", "frame": 18, "symbol": "Forward-Top"}]


def test_json_errors():
    with pytest.raises(SOSError, match="missing"):
        parse_sos_json('{"fps": 20, "entries": []}')
    with pytest.raises(SOSError, match="valid parts"):
        parse_sos_json('{"fps":20,"num_frames":4,"entries":[{"part":"ZZ","frame":0,"symbol":"Forward"}]}')
    with pytest.raises(SOSError, match="outside"):
        parse_sos_json('{"fps":20,"num_frames":4,"entries":[{"part":"LA","frame":9,"symbol":"Forward-Top"}]}')
    with pytest.raises(SOSError, match="invalid JSON"):
        parse_sos_json("{not json")
