from django.apps import AppConfig


class BraidConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'apps.braid'
    verbose_name = 'Braid words, normal forms and extraction'
