import os

import django

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'wseries.settings')
django.setup()
