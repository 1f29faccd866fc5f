from django.apps import AppConfig


class FlowConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'apps.flow'
    verbose_name = 'Hamiltonian flow and link preservation'
