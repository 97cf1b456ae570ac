import random

import pytest

from celldrill.ingest import CellRecord, MnoConfig

OPENCELLID_HEADER = ("radio,mcc,net,area,cell,unit,lon,lat,range,samples,"
                     "changeable,created,updated,averageSignal")


def csv_line(radio="LTE", mcc=214, net=1, area=10, cell=100, lon=-3.70,
             lat=40.00, rng=1000, samples=500):
    return (f"{radio},{mcc},{net},{area},{cell},0,{lon},{lat},{rng},"
            f"{samples},1,0,0,0")


def make_csv(lines, header=True):
    rows = [OPENCELLID_HEADER] if header else []
    rows.extend(lines)
    return "\n".join(rows) + "\n"


def rec(mnc=1, rat="LTE", tac=10, cid=100, lat=40.0, lon=-3.7, samples=500):
    return CellRecord(rat=rat, mnc=mnc, tac=tac, cid=cid, lat=lat, lon=lon,
                      samples=samples)


# hand-traced 5-row fixture: CBS [100,1000] removes the 50-sample row,
# duplicates of (10,100) merge to 650, HTTAC is 10 with 950 samples
S1_ROWS = [
    rec(tac=10, cid=100, samples=500, lat=40.00, lon=-3.70),
    rec(tac=10, cid=101, samples=300, lat=40.05, lon=-3.65),
    rec(tac=20, cid=200, samples=600, lat=41.00, lon=-3.00),
    rec(tac=10, cid=100, samples=150, lat=40.10, lon=-3.60),
    rec(tac=20, cid=201, samples=50, lat=41.10, lon=-3.10),
]


@pytest.fixture
def s1_rows():
    return list(S1_ROWS)


def s1_csv_lines(mcc=214, net=1):
    return [csv_line(mcc=mcc, net=net, area=r.tac, cell=r.cid, lon=r.lon,
                     lat=r.lat, samples=r.samples) for r in S1_ROWS]


@pytest.fixture
def s1_csv():
    return make_csv(s1_csv_lines())


TEST_MNO = MnoConfig(mnc=1, label="TestNet", market_share=0.5,
                     allowed_rats=frozenset({"LTE"}))


@pytest.fixture
def test_mno():
    return TEST_MNO


def random_dataset(rng: random.Random, max_rows=10_000, max_mnos=5,
                   dup_rate=0.3):
    """Synthetic record lists with controllable duplicate-key rate."""
    n_mnos = rng.randint(1, max_mnos)
    mncs = rng.sample(range(1, 40), n_mnos)
    n_rows = rng.randint(1, max_rows)
    rows = []
    seen_keys: dict[int, list[tuple[int, int]]] = {m: [] for m in mncs}
    for _ in range(n_rows):
        mnc = rng.choice(mncs)
        keys = seen_keys[mnc]
        if keys and rng.random() < dup_rate:
            tac, cid = rng.choice(keys)
        else:
            tac = rng.randint(1, 12)
            cid = rng.randint(1, 60)
            keys.append((tac, cid))
        rows.append(rec(
            mnc=mnc,
            rat=rng.choice(["LTE", "LTE", "LTE", "UMTS", "GSM"]),
            tac=tac, cid=cid,
            lat=round(rng.uniform(36.0, 43.0), 6),
            lon=round(rng.uniform(-9.0, 3.0), 6),
            samples=rng.randint(0, 1500),
        ))
    mnos = [MnoConfig(mnc=m, label=f"op{m}", market_share=0.1,
                      allowed_rats=frozenset({"LTE"})) for m in mncs]
    return rows, mnos
