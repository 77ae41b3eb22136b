import os

DEBUG = False

PROJ_ROOT = os.path.dirname(os.path.realpath(__file__))
REPO_ROOT = os.path.realpath(os.path.join(PROJ_ROOT, '..'))

# Nothing is stored; the test runner still wants a database.
DATABASES = {
    'default': {
        'ENGINE': 'django.db.backends.sqlite3',
        'NAME': ':memory:',
    }
}

TIME_ZONE = 'UTC'
USE_TZ = False
USE_I18N = False

INSTALLED_APPS = [
    'heardof.core',
    'heardof.dsl',
    'heardof.normalize',
    'heardof.classify',
    'heardof.verdict',
    'heardof.sim',
    'heardof.corpus',
    'heardof.cli',
]

DEFAULT_AUTO_FIELD = 'django.db.models.AutoField'

# Bundled .ho files and their manifest
HOC_CORPUS_DIR = os.path.join(REPO_ROOT, 'corpus')

# Where `manage.py job ci` writes its JSON artifacts
HOC_ARTIFACT_DIR = os.path.join(REPO_ROOT, 'artifacts')

# Worker cap for crossval; never changes what gets written
HOC_THREADS = int(os.environ.get('HOC_THREADS') or os.cpu_count() or 1)

HOC_DEFAULT_N = 4
HOC_MAX_N = 6
HOC_DEFAULT_DEPTH = 6

# Largest n tried when deciding whether a proviso violation is harmless
HOC_PROVISO_BOUND = 6

# Searches estimated above this many abstract states are refused
HOC_MAX_STATES = 200000

HOC_REPORT_SCHEMA = 1
HOC_WITNESS_SCHEMA = 1

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'verbose': {
            'format': '%(levelname)s %(asctime)s %(module)s %(process)d %(thread)d %(message)s'
        },
        'simple': {
            'format': '%(module)s %(levelname)s %(message)s'
        },
    },
    'handlers': {
        'null': {
            'level': 'DEBUG',
            'class': 'logging.NullHandler',
        },
        'console': {
            'level': 'DEBUG',
            'class': 'logging.StreamHandler',
            'formatter': 'simple'
        },
    },
    'loggers': {
        'django': {
            'handlers': ['console'],
            'propagate': True,
            'level': 'INFO',
        },
        'heardof': {
            'handlers': ['console'],
            'level': 'DEBUG' if os.environ.get('HOC_DEBUG') else 'WARNING',
        }
    },
}
