"""
Django settings for wseries project.

The project has no web surface and no database: Django provides the settings
layer, the management command runner that serves as the CLI and the test
runner. Numeric defaults for the series toolkit live at the bottom.

For the full list of Django settings and their values, see
https://docs.djangoproject.com/en/4.2/ref/settings/
"""

from os import getenv
from pathlib import Path
from dotenv import load_dotenv

load_dotenv()

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent


# SECURITY WARNING: keep the secret key used in production secret!
SECRET_KEY = getenv(
    'SECRET_KEY',
    'django-insecure-7w#q1m3v!k2d$0e9x^s8r4t@b6n5y&z+l)c(p_h-u=gfa*joi',
)

ALLOWED_HOSTS = []


# Application definition

INSTALLED_APPS = [
    'lambert',
]

DATABASES = {}


# Logging
# https://docs.djangoproject.com/en/4.2/topics/logging/

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'plain': {
            'format': '{levelname} {name}: {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'plain',
        },
    },
    'loggers': {
        'lambert': {
            'handlers': ['console'],
            'level': getenv('LOG_LEVEL', 'WARNING'),
        },
    },
}


# Internationalization
# https://docs.djangoproject.com/en/4.2/topics/i18n/

LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = False

USE_TZ = True


# Arbitrary precision arithmetic

PRECISION_BITS = 200
GUARD_BITS = 32
TOLERANCE_MARGIN_BITS = 16
REFERENCE_EXTRA_BITS = 32
DIGITS = 30

# Series truncation

MAX_TERMS = 64
SERIES_MIN_ARGUMENT = 2

# Stirling tables

STIRLING_MAX_N = 64
STIRLING_CEILING = 1024

# Reference solver

ORACLE_SEED_BISECTIONS = 48
ORACLE_MAX_ITERATIONS = 200
ORACLE_RESIDUAL_MARGIN_BITS = 12
ORACLE_TAYLOR_MAX = 12

# Experiments

DIVERGENCE_WINDOW = 10
SCAN_POINTS = 50
SCAN_WORKERS = int(getenv('SCAN_WORKERS', '1'))
ORDER_FIT_X = '1e40'
TAYLOR_MAX_TERMS = 8
TAYLOR_MAX_COEFFICIENTS = 6

# Checks

CHECK_TOLERANCE_FACTOR = 10
IDENTITY_L_MAX = 25
IDENTITY_MARGIN_BITS = 20
IDENTITY_GRID_POINTS = 5
