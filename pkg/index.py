# Copyright 2019-2026 AstroLab Software
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
import os
import sys

from braidfield.cli import main
from braidfield.configuration import extract_configuration

# Enable timing of the pipeline stages, if requested
if "BRAIDFIELD_TELEMETRY" in os.environ:
    from telemetry import stage_telemetry

    wrap = stage_telemetry
else:
    wrap = None

if __name__ == "__main__":
    args = extract_configuration("config.yml")
    sys.exit(main(sys.argv[1:], configuration=args, wrap=wrap))
