import json

from django.test import SimpleTestCase


class VerifyEndpointTests(SimpleTestCase):
    def post(self, url, body):
        return self.client.post(url, data=json.dumps(body), content_type="application/json")

    def test_family_iv_holds(self):
        resp = self.post("/api/verify/", {"family": "iv", "a": "8", "C": "1"})
        self.assertEqual(resp.status_code, 200)
        data = resp.json()
        self.assertEqual(data["exit_code"], 0)
        self.assertTrue(data["holds"])

    def test_counterexample_is_reported_not_raised(self):
        body = {"kind": "exppoly", "lambda": "1", "coeffs": ["0", "1", "1"], "a": "2", "b": "3"}
        resp = self.post("/api/verify/", body)
        self.assertEqual(resp.status_code, 200)
        self.assertEqual(resp.json()["exit_code"], 1)

    def test_get_is_rejected(self):
        resp = self.client.get("/api/verify/")
        self.assertEqual(resp.status_code, 405)

    def test_bad_json_is_a_client_error(self):
        resp = self.client.post("/api/verify/", data="{not json", content_type="application/json")
        self.assertEqual(resp.status_code, 400)
        self.assertIn("error", resp.json())

    def test_missing_values(self):
        resp = self.post("/api/verify/", {"kind": "affine", "slope": "1", "intercept": "0"})
        self.assertEqual(resp.status_code, 400)


class ClassifyEndpointTests(SimpleTestCase):
    def test_eighth_relation_includes_family_iv(self):
        resp = self.client.post(
            "/api/classify/", data=json.dumps({"a": "8", "b": "-1"}), content_type="application/json"
        )
        self.assertEqual(resp.status_code, 200)
        data = resp.json()
        self.assertTrue(data["includes_iv"])
        self.assertEqual([f["kind"] for f in data["families"]], ["i", "ii", "iii", "iv"])

    def test_generic_pair(self):
        resp = self.client.post(
            "/api/classify/", data=json.dumps({"a": 2, "b": 1}), content_type="application/json"
        )
        self.assertEqual(resp.status_code, 200)
        self.assertFalse(resp.json()["includes_iv"])

    def test_zero_value_is_rejected(self):
        resp = self.client.post(
            "/api/classify/", data=json.dumps({"a": "0", "b": "1"}), content_type="application/json"
        )
        self.assertEqual(resp.status_code, 400)


class DiophantineEndpointTests(SimpleTestCase):
    def test_mod9_sieve(self):
        resp = self.client.get("/api/diophantine/mod9/")
        self.assertEqual(resp.status_code, 200)
        data = resp.json()
        self.assertTrue(data["passed"])
        self.assertEqual(data["certificate"], "mod9")

    def test_query_parameters(self):
        resp = self.client.get("/api/diophantine/squares/", {"k": "2", "nmax": "500"})
        self.assertEqual(resp.status_code, 200)
        self.assertEqual(resp.json()["result"]["hits"], [])

    def test_unknown_certificate(self):
        resp = self.client.get("/api/diophantine/nope/")
        self.assertEqual(resp.status_code, 400)

    def test_non_integer_parameter(self):
        resp = self.client.get("/api/diophantine/squares/", {"k": "two"})
        self.assertEqual(resp.status_code, 400)


class JetEndpointTests(SimpleTestCase):
    def test_family_iv_a_point_matches_closed_form(self):
        resp = self.client.post(
            "/api/jet/",
            data=json.dumps({"family": "iv", "a": "8", "anchor": "a-point", "order": 8}),
            content_type="application/json",
        )
        self.assertEqual(resp.status_code, 200)
        data = resp.json()
        self.assertTrue(data["matches"])
        self.assertIsNone(data["first_mismatch"])

    def test_unknown_anchor(self):
        resp = self.client.post(
            "/api/jet/",
            data=json.dumps({"family": "iv", "a": "8", "anchor": "somewhere"}),
            content_type="application/json",
        )
        self.assertEqual(resp.status_code, 400)


class ReportsEndpointTests(SimpleTestCase):
    def test_list_reports_shape(self):
        resp = self.client.get("/api/reports/", {"type": "no-such-type"})
        self.assertEqual(resp.status_code, 200)
        self.assertEqual(resp.json(), {"reports": []})
