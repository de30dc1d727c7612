# Unit, integration and property tests for the connectivity space engine
