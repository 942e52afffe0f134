from django.apps import AppConfig


class DescentConfig(AppConfig):
    name = "descent"
    verbose_name = "Galois descent data"
