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

import os
import pathlib
import subprocess

import pytest

SOURCE_DIR = pathlib.Path(os.environ.get("FAE_SOURCE_DIR", pathlib.Path(__file__).parents[2]))


@pytest.fixture(scope="session")
def source_dir():
    return SOURCE_DIR


@pytest.fixture(scope="session")
def fae_bin():
    path = os.environ.get("FAE_BIN")
    if not path:
        pytest.skip("FAE_BIN not set")
    return path


@pytest.fixture(scope="session")
def model_server():
    path = os.environ.get("FAE_MODEL_SERVER")
    if not path:
        pytest.skip("FAE_MODEL_SERVER not set")
    return path


@pytest.fixture
def run(fae_bin, source_dir):
    def _run(*args, check=False):
        proc = subprocess.run([fae_bin, *args], cwd=source_dir, capture_output=True, text=True,
                              timeout=300)
        if check:
            assert proc.returncode == 0, proc.stderr
        return proc

    return _run
