"""Writes the synthetic desk-scale inputs under data/.

The series imitate a small summer-peaking island grid: a 2024 hourly load profile peaking at
57 MW in mid-July/early August, an hourly wholesale price with evening and winter spikes, a
yearly peak projection from 62 MW (2025) to 98 MW (2050), a capacity price history and a few
scarcity event windows. Output is deterministic for a given seed.
"""

import argparse
import csv
import datetime as dt
from pathlib import Path

import numpy as np

PEAK_DAYS = {(7, 15): 1.0, (7, 16): 0.995, (8, 2): 0.99, (8, 3): 0.985, (8, 5): 0.98}


def hourly_index(year):
    start = dt.datetime(year, 1, 1)
    hours = (dt.datetime(year + 1, 1, 1) - start).days * 24
    return [start + dt.timedelta(hours=h) for h in range(hours)]


def load_profile(stamps, rng, base_peak):
    doy = np.array([s.timetuple().tm_yday for s in stamps], dtype=float)
    hour = np.array([s.hour for s in stamps], dtype=float)
    # tourist season: strong bump centred on late July
    season = 0.42 + 0.58 * np.exp(-((doy - 205.0) / 38.0) ** 2) + 0.08 * np.exp(-((doy - 15.0) / 30.0) ** 2)
    daily = 0.62 + 0.26 * np.exp(-((hour - 18.0) / 3.5) ** 2) + 0.12 * np.exp(-((hour - 11.0) / 4.0) ** 2)
    daily_noise = rng.normal(1.0, 0.04, size=len(stamps) // 24 + 1)
    day = (doy - 1).astype(int)
    load = season * daily * daily_noise[day] * (1.0 + rng.normal(0.0, 0.01, size=len(stamps)))
    # pin the hottest days on top so they are the annual peaks
    for i, s in enumerate(stamps):
        boost = PEAK_DAYS.get((s.month, s.day))
        if boost is not None:
            load[i] = boost * daily[i] / daily.max() * 1.0
    others = np.array([(s.month, s.day) not in PEAK_DAYS for s in stamps])
    load[others] = np.minimum(load[others], 0.97)
    return base_peak * load / load.max()


def price_profile(stamps, rng):
    doy = np.array([s.timetuple().tm_yday for s in stamps], dtype=float)
    hour = np.array([s.hour for s in stamps], dtype=float)
    winter = np.exp(-((doy - 20.0) / 25.0) ** 2) + np.exp(-((doy - 355.0) / 20.0) ** 2)
    summer = np.exp(-((doy - 205.0) / 30.0) ** 2)
    shape = 1.0 + 0.45 * np.exp(-((hour - 18.0) / 2.5) ** 2) + 0.2 * np.exp(-((hour - 8.0) / 2.0) ** 2)
    price = (32.0 + 45.0 * winter + 18.0 * summer) * shape * rng.lognormal(0.0, 0.12, size=len(stamps))
    spikes = rng.random(len(stamps)) < 0.004
    price[spikes] *= rng.uniform(2.5, 6.0, size=spikes.sum())
    return np.maximum(price, 5.0)


def write_series(path, stamps, column, values):
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["timestamp", column])
        for s, v in zip(stamps, values):
            w.writerow([s.strftime("%Y-%m-%d %H:%M"), f"{v:.4f}"])


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=Path(__file__).resolve().parent.parent / "data")
    ap.add_argument("--seed", type=int, default=2024)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    args.out.mkdir(parents=True, exist_ok=True)

    stamps = hourly_index(2024)
    write_series(args.out / "load_2024.csv", stamps, "load_mw", load_profile(stamps, rng, 57.0))
    write_series(args.out / "price_2024.csv", stamps, "lmp_usd_per_mwh", price_profile(stamps, rng))

    with open(args.out / "peak_projection.csv", "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["year", "peak_mw"])
        for y in range(2025, 2051):
            t = (y - 2025) / 25.0
            w.writerow([y, f"{62.0 + 36.0 * (0.7 * t + 0.3 * t * t):.3f}"])

    with open(args.out / "capacity_price.csv", "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["year", "price_per_kw_month"])
        for y, p in [(2019, 7.03), (2020, 5.30), (2021, 4.63), (2022, 3.80), (2023, 2.00),
                     (2024, 2.61), (2025, 2.64), (2026, 2.59), (2027, 3.58), (2028, 3.064)]:
            w.writerow([y, f"{p:.3f}"])

    with open(args.out / "scarcity_events.csv", "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["date", "hour_begin", "hour_end"])
        for d, a, b in [("2024-07-15", 16, 20), ("2024-08-02", 17, 19), ("2024-08-05", 15, 18), ("2024-01-20", 17, 19)]:
            w.writerow([d, a, b])


if __name__ == "__main__":
    main()
