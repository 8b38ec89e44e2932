# sharelab_api/urls.py
from django.urls import path
from . import views

urlpatterns = [
    path("verify/", views.verify_candidate, name="verify_candidate"),
    path("classify/", views.classify_values, name="classify_values"),
    path("diophantine/<str:name>/", views.diophantine_certificate, name="diophantine_certificate"),
    path("jet/", views.jet, name="jet"),
    path("reports/", views.list_reports, name="list_reports"),
]
