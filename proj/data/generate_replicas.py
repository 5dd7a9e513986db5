#!/usr/bin/env python3
"""Regenerates the two study-data replicas committed in this directory.

These files are NOT the original records. They are synthetic replicas,
drawn from per-class distributions whose shapes, ranges, class balance and
separability are modeled on the published descriptions of:

  * the South African coronary heart disease study (462 men, 9 features,
    160 CHD cases / 302 controls; Rousseauw et al. 1983, distributed with
    "The Elements of Statistical Learning"), and
  * the Haberman breast-cancer survival study (306 patients, 3 features,
    225 five-year survivors / 81 deaths; UCI repository).

The replicas keep the exact row counts, column layout, categorical coding
(famhist Present/Absent) and label balance of the originals so the loading
schemas, fold arithmetic and evaluation harness exercise the real shapes.
Classifier scores on these files are calibrated to sit near the published
operating points, but they are not measurements of the original data. To
evaluate against the originals, drop-in replace the CSVs: the schemas and
every downstream tool stay unchanged.

Running this script rewrites saheart.csv and haberman.csv byte-for-byte
(fixed RandomState seeds, version-stable legacy numpy generator).
"""

import numpy as np

OUT_DIR = __file__.rsplit("/", 1)[0]


def clip_round(values, lo, hi, decimals):
    values = np.clip(values, lo, hi)
    return np.round(values, decimals) if decimals > 0 else np.round(values).astype(int)


def saheart(path):
    rng = np.random.RandomState(19830501)
    rows = []
    for chd, count in ((0, 302), (1, 160)):
        body = rng.normal(size=count)       # shared build factor
        life = rng.normal(size=count)       # shared lifestyle factor

        def mix(weight, size=count):
            return weight * body + np.sqrt(1.0 - weight**2) * rng.normal(size=size)

        age_mu, age_sd = (38.5, 13.5) if chd == 0 else (50.5, 9.0)
        age = clip_round(age_mu + age_sd * mix(0.55), 15, 64, 0)

        sbp_shift = 0.0 if chd == 0 else 5.0
        sbp = clip_round(131.0 + sbp_shift + 13.0 * mix(0.45) + 0.22 * (age - 42), 101, 218, 0)

        smoke_p0 = 0.38 if chd == 0 else 0.12
        smoke_mu = 0.55 if chd == 0 else 1.35
        smokes = rng.uniform(size=count) > smoke_p0
        amount = np.exp(smoke_mu + 0.95 * (0.4 * life + 0.92 * rng.normal(size=count))
                        + 0.012 * (age - 40))
        tobacco = clip_round(np.where(smokes, amount, 0.0), 0.0, 31.2, 2)

        ldl_mu = 4.35 if chd == 0 else 5.50
        ldl = clip_round(ldl_mu + 1.95 * (0.35 * body + 0.94 * rng.normal(size=count)), 0.98,
                         15.33, 2)

        adi_mu = 23.6 if chd == 0 else 28.1
        adiposity = clip_round(adi_mu + 7.2 * mix(0.75) + 0.10 * (age - 42), 6.74, 42.49, 2)

        fam_p = 0.32 if chd == 0 else 0.59
        famhist = np.where(rng.uniform(size=count) < fam_p, "Present", "Absent")

        typea_mu = 52.5 if chd == 0 else 54.5
        typea = clip_round(typea_mu + 9.7 * rng.normal(size=count), 13, 78, 0)

        obesity = clip_round(26.0 + 4.1 * (0.72 * (adiposity - 25.0) / 7.2
                                           + 0.69 * rng.normal(size=count)), 14.70, 46.58, 2)

        drinks = rng.uniform(size=count) > 0.26
        booze = np.exp(2.3 + 1.25 * (0.45 * life + 0.89 * rng.normal(size=count)))
        alcohol = clip_round(np.where(drinks, booze, 0.0), 0.0, 147.19, 2)

        for i in range(count):
            rows.append((sbp[i], tobacco[i], ldl[i], adiposity[i], famhist[i], typea[i],
                         obesity[i], alcohol[i], age[i], chd))

    order = rng.permutation(len(rows))
    with open(path, "w") as out:
        out.write("row.names,sbp,tobacco,ldl,adiposity,famhist,typea,obesity,alcohol,age,chd\n")
        for name, idx in enumerate(order, start=1):
            sbp, tob, ldl, adi, fam, typea, obe, alc, age, chd = rows[idx]
            out.write(f"{name},{sbp},{tob:g},{ldl:g},{adi:g},{fam},{typea},{obe:g},{alc:g}"
                      f",{age},{chd}\n")


def haberman(path):
    rng = np.random.RandomState(19580101)
    rows = []
    for survival, count in ((1, 225), (2, 81)):
        age_mu = 51.5 if survival == 1 else 53.5
        age = clip_round(age_mu + 10.8 * rng.normal(size=count), 30, 83, 0)
        year = 58 + rng.randint(0, 12, size=count)

        node_p0 = 0.56 if survival == 1 else 0.25
        node_mu = 0.95 if survival == 1 else 1.75
        has_nodes = rng.uniform(size=count) > node_p0
        node_count = np.exp(node_mu + 1.05 * rng.normal(size=count))
        nodes = np.where(has_nodes, clip_round(node_count, 1, 52, 0), 0)

        for i in range(count):
            rows.append((age[i], year[i], nodes[i], survival))

    order = rng.permutation(len(rows))
    with open(path, "w") as out:
        out.write("age,op_year,axillary_nodes,survival\n")
        for idx in order:
            age, year, nodes, survival = rows[idx]
            out.write(f"{age},{year},{nodes},{survival}\n")


if __name__ == "__main__":
    saheart(OUT_DIR + "/saheart.csv")
    haberman(OUT_DIR + "/haberman.csv")
    print("wrote saheart.csv and haberman.csv")
