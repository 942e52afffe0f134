from django.apps import AppConfig


class NilalgConfig(AppConfig):
    name = "nilalg"
    verbose_name = "Nilpotent algebras"
