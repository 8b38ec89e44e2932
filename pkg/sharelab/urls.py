# sharelab/urls.py
"""
URL configuration for the sharelab project: everything lives under /api/.
"""

from django.urls import path, include

urlpatterns = [
    path("api/", include("sharelab_api.urls")),
]
