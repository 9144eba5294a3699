# Copyright 2026 The MVTO Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.


import pytest

import mvto

H1 = """\
r 1 x 0
r 2 x 0
r 1 y 0
r 3 z 0
w 1 x 5
w 3 y 15
w 2 y 10
w 1 z 10
c 1
c 2
r 4 x 5
r 4 y 10
w 3 z 15
c 3
r 4 z 10
"""


def test_transactions_and_history():
    stm = mvto.Stm(2)
    t1 = stm.begin()
    t2 = stm.begin()
    assert (t1.id, t2.id) == (1, 2)
    assert stm.read(t2, 1) == 0
    stm.write(t1, 1, 5)
    result = stm.try_commit(t1)
    assert not result
    assert (result.conflict.creator, result.conflict.committer, result.conflict.reader) == (0, 1, 2)
    assert t1.status == mvto.TxStatus.ABORTED
    assert stm.try_commit(t2)
    assert stm.live_ids() == []
    h = stm.history()
    assert str(h) == "b 1\nb 2\nr 2 x1 0\nw 1 x1 5\na 1\nc 2\n"
    assert mvto.check(h).opaque


def test_usage_errors():
    with pytest.raises(mvto.UsageError):
        mvto.Stm(0)
    stm = mvto.Stm(1)
    t = stm.begin()
    stm.write(t, 1, 3)
    with pytest.raises(mvto.UsageError):
        stm.read(t, 1)


def test_gc_deletes_versions():
    stm = mvto.Stm(1, gc_threshold=1)
    for value in range(1, 6):
        t = stm.begin()
        stm.write(t, 1, value)
        assert stm.try_commit(t)
    versions = stm.versions(1)
    assert [v.ts for v in versions] == [5]
    assert stm.versions_deleted == 5


def test_parse_round_trip_and_errors():
    h = mvto.parse_history(H1)
    assert len(h) == 15
    assert mvto.serialize_history(h) == H1
    assert len(h.complete()) == 16
    assert h.events[0] == ("r", 1, "x", 0)
    with pytest.raises(mvto.ParseError):
        mvto.parse_history("w 1 x 1\nr 1 x 0\n")


def test_checker_on_example():
    h = mvto.parse_history(H1)
    given = mvto.check(h, {"x": [0, 1], "y": [0, 2, 3], "z": [0, 1, 3]})
    assert given.outcome == "not-opaque"
    assert given.cycle == [1, 2]
    assert mvto.check(h, "brute").orders_tried == 72


def test_checker_finds_witness():
    h = mvto.parse_history("w 2 x 2\nc 2\nr 3 x 2\nc 3\nw 1 x 1\nc 1\n")
    assert not mvto.check(h, "ts").opaque
    v = mvto.check(h, "brute")
    assert v.opaque
    assert v.order == {"x": [0, 2, 1]}
    assert v.serialization == [0, 2, 3, 1]
    assert mvto.is_legal(v.witness)


def test_stress_run():
    report = mvto.run_stress(threads=4, txs=20, objects=4, gc_threshold=2, seed=3)
    assert report.ok
    assert report.aborted_read_only == 0
    assert report.verdict.opaque
    assert "verdict=opaque" in report.to_key_values()


def test_replay():
    h = mvto.replay("step 1 b\nstep 2 b\nstep 2 r 1\nstep 1 w 1 5\nstep 1 c\nstep 2 c\n")
    assert str(h) == "b 1\nb 2\nr 2 x1 0\nw 1 x1 5\na 1\nc 2\n"
    assert len(mvto.replay("")) == 0
