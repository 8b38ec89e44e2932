from report_store import ReportEntry, ReportStore


def test_missing_file_is_empty(tmp_path):
    assert ReportStore(tmp_path / "nope.json").load() == []


def test_invalid_json_is_empty(tmp_path):
    path = tmp_path / "reports.json"
    path.write_text("{not json", encoding="utf-8")
    assert ReportStore(path).load() == []


def test_non_list_is_empty(tmp_path):
    path = tmp_path / "reports.json"
    path.write_text('{"event_type": "verify"}', encoding="utf-8")
    assert ReportStore(path).load() == []


def test_append_and_filter(tmp_path):
    store = ReportStore(tmp_path / "sub" / "reports.json")
    store.append(store.create_entry("verify", {"exit_code": 0}, {"holds": True}))
    store.append(store.create_entry("jet", {"order": 8}, {"matches": True}))
    store.append(store.create_entry("verify", {"exit_code": 1}, {"holds": False}))

    assert len(store.load()) == 3
    verified = store.by_type("verify")
    assert [e.meta["exit_code"] for e in verified] == [0, 1]
    assert verified[1].payload == {"holds": False}


def test_entry_timestamp_is_utc():
    entry = ReportStore.create_entry("verify", {}, {})
    assert entry.timestamp.endswith("Z")


def test_entry_from_partial_dict():
    entry = ReportEntry.from_dict({"event_type": "jet", "meta": None})
    assert entry.meta == {}
    assert entry.payload == {}
    assert entry.timestamp == ""


def test_default_path_comes_from_environment(tmp_path):
    assert ReportStore().path == tmp_path / "reports.json"
