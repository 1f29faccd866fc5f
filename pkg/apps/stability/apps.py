from django.apps import AppConfig


class StabilityConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'apps.stability'
    verbose_name = 'Braid-type stability under small Hofer perturbations'
