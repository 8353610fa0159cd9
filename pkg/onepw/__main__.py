from onepw.main import main

main()
