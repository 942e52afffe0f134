from django.apps import AppConfig


class FormClassConfig(AppConfig):
    name = "formclass"
    verbose_name = "Structure matrix normal forms and counts"
