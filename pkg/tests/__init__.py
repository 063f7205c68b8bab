# bivekua test suite
