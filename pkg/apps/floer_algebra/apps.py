from django.apps import AppConfig


class FloerAlgebraConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'apps.floer_algebra'
    verbose_name = 'Action-filtered Z/2 chain complexes'
