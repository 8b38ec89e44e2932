# sharelab_api/apps.py
from django.apps import AppConfig


class SharelabApiConfig(AppConfig):
    default_auto_field = "django.db.models.BigAutoField"
    name = "sharelab_api"
