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

from django.conf import settings
from django.test import SimpleTestCase


class TestSettings(SimpleTestCase):
    def test_experiment_defaults(self):
        self.assertEqual(settings.NDCG_LAB_DEFAULT_SEED, 0)
        self.assertGreaterEqual(settings.NDCG_LAB_MAX_THREADS, 1)
        self.assertGreaterEqual(settings.NDCG_LAB_CALIBRATION_SIZE, 100_000)
        self.assertEqual(settings.NDCG_LAB_NONCONVERGENCE_FLOORS, (0.3, 0.05))

    def test_no_database(self):
        for conf in settings.DATABASES.values():
            self.assertEqual(conf.get("ENGINE"), "django.db.backends.dummy")

    def test_project_logger(self):
        self.assertIn("ndcg_lab", settings.LOGGING["loggers"])
        self.assertFalse(settings.LOGGING["loggers"]["ndcg_lab"]["propagate"])
