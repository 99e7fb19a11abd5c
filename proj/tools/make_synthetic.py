# Copyright 2026 The FAE Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Regenerates data/synthetic.csv (1000 rows, seeded)."""

import argparse

import numpy as np


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--rows", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=20261016)
    ap.add_argument("--out", default="data/synthetic.csv")
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    n = args.rows
    age = np.round(rng.uniform(18, 80, n), 1)
    income = np.round(rng.lognormal(3.5, 0.4, n), 2)
    tenure = rng.integers(0, 11, n)
    region = rng.integers(0, 4, n)
    with open(args.out, "w") as f:
        f.write("age,income,tenure,region\n")
        for row in zip(age, income, tenure, region):
            f.write("%.1f,%.2f,%d,%d\n" % row)


if __name__ == "__main__":
    main()
