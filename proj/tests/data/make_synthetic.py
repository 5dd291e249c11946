"""Regenerates synthetic_population.csv: a seeded stand-in population with realistic spreads."""
import csv
import random

STATS = {  # measure: (male mean, sd, min, max), (female mean, sd, min, max)
    "PH": ((444.37, 13.37, 414, 489), (415.1, 13.5, 373, 447)),
    "SEH": ((234.7, 16.73, 188, 308), (231.3, 16.7, 191, 282)),
    "BPL": ((454.03, 18.17, 402, 498), (447.2, 17.3, 394, 478)),
    "BKL": ((521.47, 9.54, 496, 548), (509.0, 13.7, 475, 546)),
    "HB": ((350.53, 9.4, 328, 382), (366.2, 8.5, 344, 390)),
    "SSH": ((511.78, 14.9, 470, 556), (488.0, 13.3, 447, 522)),
    "SEB": ((447.47, 15.36, 396, 492), (422.9, 17.2, 390, 464)),
    "TT": ((156.14, 7.76, 131, 178), (145.1, 9.7, 126, 175)),
    "AL": ((364.1, 10.77, 331, 394), (342.4, 9.6, 322, 366)),
    "EFL": ((450.46, 7.67, 426, 471), (406.9, 9.5, 385, 428)),
    "SCH": ((511.7, 10.22, 484, 540), (493.6, 10.8, 469, 524)),
}
COLUMNS = ["id", "gender", "age", "study_year"] + list(STATS)


def main():
    rng = random.Random(20240518)
    rows = []
    for gender, count, years in (("M", 300, [1] * 70 + [2] * 70 + [3] * 70 + [4] * 90),
                                 ("F", 80, [1] * 20 + [2] * 20 + [3] * 20 + [4] * 20)):
        idx = 0 if gender == "M" else 1
        for i in range(count):
            row = {"id": f"{gender}{i + 1:03d}", "gender": gender,
                   "age": 17 + years[i] + rng.randint(0, 4), "study_year": years[i]}
            for m, pair in STATS.items():
                mean, sd, lo, hi = pair[idx]
                row[m] = f"{min(max(rng.gauss(mean, sd), lo), hi):.1f}"
            rows.append(row)
    with open("synthetic_population.csv", "w", newline="") as f:
        w = csv.DictWriter(f, COLUMNS, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)


if __name__ == "__main__":
    main()
