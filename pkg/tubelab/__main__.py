from tubelab.main import main

main()
