from django.urls import path, include
from rest_framework.routers import DefaultRouter
from . import views

router = DefaultRouter(trailing_slash=True)
router.register(r'families', views.FamilyViewSet, basename='family')

urlpatterns = [
    # API endpoints
    path('api/', include(router.urls)),
    path('api/expand/', views.expand, name='expand'),
]
