# __main__.py

from gklo_verifier import main

main()
