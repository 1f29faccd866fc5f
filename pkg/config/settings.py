"""
Django settings for the braidflow project.
"""

import os
from pathlib import Path

# ------------------------------------------------------------------
# Base directory
# ------------------------------------------------------------------
BASE_DIR = Path(__file__).resolve().parent.parent


# ------------------------------------------------------------------
# Security
# ------------------------------------------------------------------
SECRET_KEY = 'django-insecure-braidflow-is-a-command-line-tool'
DEBUG = False
ALLOWED_HOSTS = []


# ------------------------------------------------------------------
# Application definition
# ------------------------------------------------------------------
INSTALLED_APPS = [
    'django.contrib.contenttypes',
    'django.contrib.auth',

    # Third-party
    'rest_framework',

    # Local apps
    'apps.core',
    'apps.geometry',
    'apps.hamiltonian',
    'apps.flow',
    'apps.braid',
    'apps.floer_algebra',
    'apps.stability',
]


# ------------------------------------------------------------------
# Database (unused; keeps the test runner happy)
# ------------------------------------------------------------------
DATABASES = {
    'default': {
        'ENGINE': 'django.db.backends.sqlite3',
        'NAME': BASE_DIR / 'db.sqlite3',
    }
}

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'


# ------------------------------------------------------------------
# Internationalization
# ------------------------------------------------------------------
LANGUAGE_CODE = 'en-us'
TIME_ZONE = 'UTC'
USE_I18N = False
USE_TZ = True


# ------------------------------------------------------------------
# Django REST Framework (serializers only)
# ------------------------------------------------------------------
REST_FRAMEWORK = {
    'COERCE_DECIMAL_TO_STRING': True,
    'UNAUTHENTICATED_USER': None,
}


# ------------------------------------------------------------------
# Logging
# ------------------------------------------------------------------
LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'verbose': {
            'format': '{asctime} {levelname} {name}: {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'verbose',
        },
    },
    'loggers': {
        'apps': {
            'handlers': ['console'],
            'level': 'WARNING',
            'propagate': False,
        },
    },
}


# ------------------------------------------------------------------
# Braidflow numerical configuration (plain settings, no environment)
# ------------------------------------------------------------------
BRAIDFLOW_CONFIG = {
    # flow
    'FLOW_RTOL': 1e-10,
    'FLOW_ATOL': 1e-10,
    'ESCAPE_TOLERANCE': 1e-6,
    'SEPARATION_MARGIN': 1e-4,
    'PRESERVATION_TOL': 1e-6,
    'PRESERVATION_SAMPLES': 16,
    # hamiltonian
    'SUPPORT_COLLAR': 0.02,
    'SUPPORT_TOL': 1e-12,
    'HOFER_T_NODES': 33,
    'HOFER_GRID': 64,
    'HOFER_REFINE': 8,
    'HOFER_WIDTH': None,
    'HOFER_MAX_GRID': 512,
    # geometry
    'LAYOUT_CLEARANCE': '1/10',
    # braid
    'CROSSING_SAMPLES': 2048,
    'CROSSING_TOL': 1e-11,
    'COINCIDENCE_WINDOW': 1e-9,
    'TANGENCY_TOL': 1e-10,
    'PROJECTION_RETRIES': 8,
    'CLOSURE_SAMPLES': 256,
    # floer_algebra
    'MAX_LABEL': 9,
    # reports
    'DECIMAL_DIGITS': 17,
    'DEFAULT_THREADS': os.cpu_count() or 1,
}
