# Copyright 2024-2026 AstroLab Software
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
"""telemetry.py -- Timing of the pipeline stages run by the command line"""

import inspect
import time
from functools import wraps

from colorama import Fore, Style


def stage_telemetry(func):
    """Wrapper printing the duration and a digest of the result of a stage"""

    @wraps(func)
    def timeit_wrapper(*args, **kwargs):
        def get_stage_ref(func_ref):
            module = inspect.getmodule(func_ref)
            return f"{module.__name__.split('.')[-1]}:{func_ref.__name__}"

        def format_args(values):
            return "||".join([f"{str(value)[:20]}" for value in values])

        start_time = time.perf_counter()
        result = func(*args, **kwargs)
        end_time = time.perf_counter()
        total_time = end_time - start_time

        context = f"___input:|{format_args(args)}|\n__output:|{str(result)[:40]}|"

        print(
            f"{Fore.BLUE}[TELEMETRY]{Style.RESET_ALL} {Style.BRIGHT}{Fore.RED}{get_stage_ref(func)}{Style.RESET_ALL}, {total_time:.4f}s\n{context}"
        )

        return result

    return timeit_wrapper
