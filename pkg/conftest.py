"""Pytest wiring: configure Django the same way manage.py / tox.ini do."""
import os

import django

os.environ.setdefault("DJANGO_SETTINGS_MODULE", "ndcg_lab.main.settings.development")
django.setup()
