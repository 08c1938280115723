# -*- coding: utf-8 -*-
"""Validation of scenario documents against the bundled JSON schema
"""

import jsonschema

from .exceptions import SchemaViolation


def _offending_field(error):
    """Name of the field an ``jsonschema`` error is about"""
    path = [str(p) for p in error.absolute_path]
    if error.validator == 'additionalProperties' and isinstance(
            error.instance, dict):
        known = set(error.schema.get('properties', {}))
        extra = sorted(k for k in error.instance if k not in known)
        if extra:
            path.append(extra[0])
    elif error.validator == 'required':
        missing = [k for k in error.validator_value
                   if k not in error.instance]
        if missing:
            path.append(missing[0])
    return '.'.join(path) or '<root>'


class SchemaValidator:
    """Main validation driver for JSON documents"""

    def __init__(self, scenario_schema):
        #: ``ScenarioSchema`` to use for the validation
        self.scenario_schema = scenario_schema
        cls = jsonschema.validators.validator_for(scenario_schema.parsed_json)
        cls.check_schema(scenario_schema.parsed_json)
        #: The ``jsonschema`` validator
        self.validator = cls(scenario_schema.parsed_json)

    def validate(self, resolved_json):
        """Perform validation, return list of :py:class:`SchemaViolation`

        resolved_json JSON document in Python representation, ``$ref``
        already resolved
        """
        errors = sorted(
            self.validator.iter_errors(resolved_json),
            key=lambda e: [str(p) for p in e.absolute_path])
        return [SchemaViolation(e.message, _offending_field(e))
                for e in errors]

    def validate_or_raise(self, resolved_json):
        """Raise the first violation, listing all of them in the message"""
        errors = self.validate(resolved_json)
        if errors:
            raise SchemaViolation(
                'Scenario violates schema: {}'.format('; '.join(
                    '{}: {}'.format(e.field, e) for e in errors)),
                errors[0].field)
