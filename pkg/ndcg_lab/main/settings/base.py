#  Copyright NDCG Lab Authors
#
#  Licensed under the Apache License, Version 2.0 (the "License");
#  you may not use this file except in compliance with the License.
#  You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
#  Unless required by applicable law or agreed to in writing, software
#  distributed under the License is distributed on an "AS IS" BASIS,
#  WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
#  See the License for the specific language governing permissions and
#  limitations under the License.

"""
Django settings for the NDCG Lab experiment runner.

Only the management-command machinery of Django is used: there is no web
surface and no database. Everything below is driven by environment variables
with in-code defaults.
"""

import logging
import os
from importlib.resources import files
from pathlib import Path

logger = logging.getLogger(__name__)

BASE_DIR: Path = files("ndcg_lab")
NDCG_LAB_PROJECT_NAME = os.getenv("NDCG_LAB_PROJECT_NAME") or "NDCG Lab"

# Quick-start development settings - unsuitable for production
SECRET_KEY = os.getenv("SECRET_KEY") or "ndcg-lab-insecure-local-key"

DEBUG = False

ALLOWED_HOSTS: list[str] = []

INSTALLED_APPS = [
    "ndcg_lab.experiments",
    "ndcg_lab.cli",
]

# No model is persisted; the test runner only needs SimpleTestCase.
DATABASES: dict = {}

USE_TZ = True
TIME_ZONE = "UTC"

# ==========================================
# Experiment defaults
# ------------------------------------------
NDCG_LAB_DEFAULT_SEED = int(os.getenv("NDCG_LAB_DEFAULT_SEED") or 0)

NDCG_LAB_MAX_THREADS = int(os.getenv("NDCG_LAB_MAX_THREADS") or os.cpu_count() or 1)
if NDCG_LAB_MAX_THREADS < 1:
    logger.warning("NDCG_LAB_MAX_THREADS must be positive, falling back to 1.")
    NDCG_LAB_MAX_THREADS = 1

NDCG_LAB_OUTPUT_DIR = os.getenv("NDCG_LAB_OUTPUT_DIR") or "."

# Size and resolution of the sample used to tabulate a scorer's conditional curve.
NDCG_LAB_CALIBRATION_SIZE = int(os.getenv("NDCG_LAB_CALIBRATION_SIZE") or 1_000_000)
NDCG_LAB_CALIBRATION_BINS = int(os.getenv("NDCG_LAB_CALIBRATION_BINS") or 200)

NDCG_LAB_NONCONVERGENCE_FLOORS = (
    float(os.getenv("NDCG_LAB_NONCONVERGENCE_FLOOR_HIGH") or 0.3),
    float(os.getenv("NDCG_LAB_NONCONVERGENCE_FLOOR_LOW") or 0.05),
)

LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "simple": {
            "format": "{levelname} {asctime} {filename}:{funcName} {message}",
            "style": "{",
        },
    },
    "handlers": {
        "console": {"class": "logging.StreamHandler", "formatter": "simple", "level": "INFO"},
    },
    "loggers": {
        "django": {
            "handlers": ["console"],
            "propagate": True,
        },
        "ndcg_lab": {
            "handlers": ["console"],
            "level": os.getenv("NDCG_LAB_LOG_LEVEL") or "INFO",
            "propagate": False,
        },
    },
    "root": {
        "handlers": ["console"],
        "level": os.getenv("DJANGO_LOG_LEVEL") or "WARNING",
    },
}
