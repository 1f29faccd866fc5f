from django.apps import AppConfig


class HamiltonianConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'apps.hamiltonian'
    verbose_name = 'Hamiltonian expressions and Hofer norms'
