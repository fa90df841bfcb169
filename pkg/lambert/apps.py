from django.apps import AppConfig


class LambertConfig(AppConfig):
    name = 'lambert'
    verbose_name = 'Series inversion of y^a e^y'
