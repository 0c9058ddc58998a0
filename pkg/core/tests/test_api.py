import math

from django.test import override_settings
from django.urls import reverse
from rest_framework import status
from rest_framework.test import APISimpleTestCase

from core import catalog


class FamilyApiTest(APISimpleTestCase):
    def test_list(self):
        response = self.client.get(reverse('family-list'))
        self.assertEqual(response.status_code, status.HTTP_200_OK)
        self.assertEqual([item['id'] for item in response.data], list(catalog.REGISTRY))

    def test_list_filter(self):
        response = self.client.get(reverse('family-list'), {'filter': 'saddle_*'})
        self.assertEqual(
            [item['id'] for item in response.data],
            ['saddle_minus', 'saddle_plus', 'saddle_ratio'],
        )
        self.assertFalse(any(item['composable'] for item in response.data))

    def test_detail(self):
        response = self.client.get(reverse('family-detail', args=['hagis']))
        self.assertEqual(response.status_code, status.HTTP_200_OK)
        self.assertEqual(response.data['params'], ['m'])
        self.assertIn('m > 1', response.data['constraints'])
        self.assertEqual(response.data['grid'][0], {'m': 2})
        self.assertIn('prod(k>=1', response.data['spec'])

    def test_unknown_family(self):
        response = self.client.get(reverse('family-detail', args=['nope']))
        self.assertEqual(response.status_code, status.HTTP_404_NOT_FOUND)
        self.assertIn('nope', response.data['detail'])


class FormApiTest(APISimpleTestCase):
    def test_closed_form(self):
        response = self.client.get(reverse('family-form', args=['powerratio']), {'params': 's=2,t=1,m=1'})
        self.assertEqual(response.status_code, status.HTTP_200_OK)
        self.assertEqual(response.data['terms'][0]['p'], '1/2')
        self.assertAlmostEqual(response.data['terms'][0]['s'], math.pi * math.sqrt(0.5), places=12)
        self.assertAlmostEqual(response.data['v'], 2 ** -2.25, places=14)
        self.assertEqual(response.data['b'], '3/4')
        self.assertFalse(response.data['alternating'])

    def test_derived_form_matches_closed_form(self):
        url = reverse('family-form', args=['partratio'])
        closed = self.client.get(url, {'params': 's=1,t=1'}).data
        derived = self.client.get(url, {'params': 's=1,t=1', 'derive': 'true'}).data
        self.assertAlmostEqual(derived['v'], closed['v'], places=12)
        self.assertAlmostEqual(derived['terms'][0]['s'], closed['terms'][0]['s'], places=12)

    def test_saddle_family_has_no_derivation(self):
        response = self.client.get(reverse('family-form', args=['saddle_minus']), {'params': 'm=2', 'derive': '1'})
        self.assertEqual(response.status_code, status.HTTP_400_BAD_REQUEST)
        self.assertEqual(response.data['error'], 'ParamError')

    def test_constraint_violation(self):
        response = self.client.get(reverse('family-form', args=['hagis']), {'params': 'm=1'})
        self.assertEqual(response.status_code, status.HTTP_400_BAD_REQUEST)
        self.assertIn('m > 1', response.data['detail'])

    def test_malformed_params(self):
        response = self.client.get(reverse('family-form', args=['hagis']), {'params': 'm'})
        self.assertEqual(response.status_code, status.HTTP_400_BAD_REQUEST)


class ExpandApiTest(APISimpleTestCase):
    def test_partitions(self):
        response = self.client.get(reverse('expand'), {'spec': 'prod(k>=1, 1/(1-q^k))', 'order': 10})
        self.assertEqual(response.status_code, status.HTTP_200_OK)
        self.assertEqual(response.data['coefficients'], ['1', '1', '2', '3', '5', '7', '11', '15', '22', '30', '42'])
        self.assertEqual(response.data['spec'], 'prod(k>=1, 1/(1-q^k))')
        self.assertEqual(response.data['order'], 10)

    def test_big_coefficients_are_strings(self):
        response = self.client.get(reverse('expand'), {'spec': 'prod(k>=1, 1/(1-q^k))', 'order': 100})
        self.assertEqual(response.data['coefficients'][100], '190569292')

    def test_missing_spec(self):
        response = self.client.get(reverse('expand'))
        self.assertEqual(response.status_code, status.HTTP_400_BAD_REQUEST)

    def test_bad_order(self):
        for order in ('abc', '-1', '100000000'):
            with self.subTest(order=order):
                response = self.client.get(reverse('expand'), {'spec': 'prod(k>=1, 1/(1-q^k))', 'order': order})
                self.assertEqual(response.status_code, status.HTTP_400_BAD_REQUEST)

    def test_syntax_error(self):
        response = self.client.get(reverse('expand'), {'spec': 'prod(k>=1, 1/(1-q^k)', 'order': 5})
        self.assertEqual(response.status_code, status.HTTP_400_BAD_REQUEST)
        self.assertEqual(response.data['error'], 'QSpecSyntaxError')

    @override_settings(QASYM_API_MAX_ORDER=50)
    def test_api_order_cap(self):
        url = reverse('expand')
        response = self.client.get(url, {'spec': 'prod(k>=1, 1/(1-q^k))', 'order': 51})
        self.assertEqual(response.status_code, status.HTTP_400_BAD_REQUEST)
        self.assertIn('at most 50', response.data['detail'])
        response = self.client.get(url, {'spec': 'prod(k>=1, 1/(1-q^k))', 'order': 50})
        self.assertEqual(response.status_code, status.HTTP_200_OK)
        self.assertEqual(response.data['coefficients'][50], '204226')

    @override_settings(QASYM_API_MAX_ORDER=500, QASYM_MAX_ORDER=40)
    def test_api_cap_never_exceeds_max_order(self):
        response = self.client.get(reverse('expand'), {'spec': 'prod(k>=1, 1/(1-q^k))', 'order': 41})
        self.assertEqual(response.status_code, status.HTTP_400_BAD_REQUEST)
