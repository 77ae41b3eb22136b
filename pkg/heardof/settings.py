from .default_settings import *

SECRET_KEY = os.environ.get('HOC_SECRET_KEY', 'heardof-local')
