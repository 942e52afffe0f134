from django.apps import AppConfig


class FpCoreConfig(AppConfig):
    name = "fpcore"
    verbose_name = "Prime field arithmetic"
