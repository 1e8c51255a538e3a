#!/usr/bin/env python3
"""Extract the six UCI tables used by the benchmark presets into data/uci/*.csv.

The tables are read from PyPI wheels that bundle them, so no access to the UCI
archive itself is needed:

    pip download --no-deps keel-ds imbalanced-databases orange3 -d wheels/
    python3 scripts/prepare_datasets.py wheels/ data/uci/

Sources:
  sonar, liver (BUPA), diabetes (Pima), breast (Wisconsin, missing rows
  already removed)              -> keel-ds
  glass (original UCI table)    -> imbalanced-databases
  heart (Cleveland, binarized diameter narrowing, '?' for missing)
                                -> Orange3
"""
import csv
import glob
import os
import sys
import zipfile


def wheel(directory, prefix):
    hits = sorted(glob.glob(os.path.join(directory, prefix + "*.whl")))
    if not hits:
        sys.exit(f"no wheel matching {prefix}* in {directory}")
    return zipfile.ZipFile(hits[-1])


def keel_rows(z, name):
    text = z.read(f"keel_ds/data/balanced/raw/{name}.dat").decode()
    rows = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("@"):
            continue
        rows.append([v.strip() for v in line.split(",")])
    return rows


def write(path, header, rows):
    with open(path, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
    print(f"{path}: {len(rows)} rows x {len(header) - 1} features")


def main():
    src, out = sys.argv[1], sys.argv[2]
    os.makedirs(out, exist_ok=True)

    keel = wheel(src, "keel_ds")
    sonar = keel_rows(keel, "sonar")
    write(os.path.join(out, "sonar.csv"),
          [f"band{i + 1}" for i in range(60)] + ["class"], sonar)

    liver = keel_rows(keel, "bupa")
    write(os.path.join(out, "liver.csv"),
          ["mcv", "alkphos", "sgpt", "sgot", "gammagt", "drinks", "selector"], liver)

    pima = keel_rows(keel, "pima")
    write(os.path.join(out, "diabetes.csv"),
          ["preg", "plas", "pres", "skin", "insu", "mass", "pedi", "age", "class"], pima)

    breast = keel_rows(keel, "wisconsin")
    write(os.path.join(out, "breast.csv"),
          ["clump", "cell_size", "cell_shape", "adhesion", "epithelial",
           "bare_nuclei", "chromatin", "nucleoli", "mitoses", "class"], breast)

    imb = wheel(src, "imbalanced_databases")
    text = imb.read("imbalanced_databases/data/glass/glass.data.txt").decode()
    glass = [line.split(",")[1:] for line in text.splitlines() if line.strip()]
    write(os.path.join(out, "glass.csv"),
          ["ri", "na", "mg", "al", "si", "k", "ca", "ba", "fe", "type"], glass)

    orange = wheel(src, "orange3")
    lines = orange.read("Orange/datasets/heart_disease.tab").decode().splitlines()
    # Re-encode Orange's symbolic values with the numeric codes of the UCI file.
    codes = {
        1: {"female": "0", "male": "1"},
        2: {"typical ang": "1", "atypical ang": "2", "non-anginal": "3", "asymptomatic": "4"},
        6: {"normal": "0", "ST-T abnormal": "1", "left vent hypertrophy": "2"},
        10: {"upsloping": "1", "flat": "2", "downsloping": "3"},
        12: {"normal": "3", "fixed defect": "6", "reversable defect": "7"},
    }
    heart = []
    for line in lines[3:]:
        if not line.strip():
            continue
        cells = line.split("\t")
        row = []
        for i, v in enumerate(cells):
            v = v.strip()
            if v in ("?", ""):
                row.append("?")
            elif i in codes:
                row.append(codes[i][v])
            else:
                row.append(v)
        heart.append(row)
    write(os.path.join(out, "heart.csv"),
          ["age", "sex", "cp", "trestbps", "chol", "fbs", "restecg", "thalach",
           "exang", "oldpeak", "slope", "ca", "thal", "num"], heart)


if __name__ == "__main__":
    main()
