import os

import django

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'heardof.settings')
django.setup()
