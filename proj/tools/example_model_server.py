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

"""Minimal external model speaking the fae stdio protocol.

Reads one JSON request per line: {"id": int, "inputs": [[...], ...]}
and answers {"id": int, "outputs": [...]} on stdout, flushing each line.

    fae explain --model-command "python3 tools/example_model_server.py f_both" ...
"""

import json
import sys

MODELS = {
    "f_male": lambda x: float(x[0]),
    "f_both": lambda x: 1.0 if x[0] != 0 and x[1] != 0 else 0.0,
}


def main():
    model = MODELS[sys.argv[1] if len(sys.argv) > 1 else "f_both"]
    for line in sys.stdin:
        if not line.strip():
            continue
        req = json.loads(line)
        out = {"id": req["id"], "outputs": [model(row) for row in req["inputs"]]}
        sys.stdout.write(json.dumps(out) + "\n")
        sys.stdout.flush()


if __name__ == "__main__":
    main()
